//! Summation with a fixed pairwise tree, so results depend only on the
//! order of the input and never on scheduling.

const LEAF: usize = 8;

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.5]), 1.5);
        let v: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn beats_naive_on_cancellation() {
        let mut v = vec![1e16];
        v.extend(std::iter::repeat_n(1.0, 1 << 12));
        v.push(-1e16);
        let naive: f64 = v.iter().sum();
        let pw = pairwise_sum(&v);
        assert!((pw - 4096.0).abs() <= (naive - 4096.0).abs());
    }

    proptest! {
        #[test]
        fn deterministic_and_close_to_exact(v in proptest::collection::vec(-1e3f64..1e3, 0..500)) {
            let a = pairwise_sum(&v);
            let b = pairwise_sum(&v.clone());
            prop_assert_eq!(a.to_bits(), b.to_bits());
            let naive: f64 = v.iter().sum();
            prop_assert!((a - naive).abs() <= 1e-9 * (1.0 + v.iter().map(|x| x.abs()).sum::<f64>()));
        }
    }
}
