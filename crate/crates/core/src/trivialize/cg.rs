//! Conjugate gradients on the graph Laplacian. The matrix-vector product
//! sweeps the edge list in order, so results do not depend on the thread
//! count.

/// Outcome of a CG solve.
#[derive(Debug, Clone, Copy)]
pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// `y = L x` for the graph Laplacian of `edges`.
fn laplacian(edges: &[[u32; 2]], x: &[f64], y: &mut [f64]) {
    y.iter_mut().for_each(|v| *v = 0.0);
    for e in edges {
        let (a, b) = (e[0] as usize, e[1] as usize);
        let d = x[a] - x[b];
        y[a] += d;
        y[b] -= d;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(x: &mut [f64]) {
    if x.is_empty() {
        return;
    }
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= m);
}

/// Solves `L x = b` on a connected graph with the mean of `b` and of `x`
/// projected out.
pub fn solve_laplacian(edges: &[[u32; 2]], b: &[f64], rel_tol: f64, max_iter: usize) -> (Vec<f64>, CgStats) {
    let n = b.len();
    let mut rhs = b.to_vec();
    remove_mean(&mut rhs);
    let bnorm = dot(&rhs, &rhs).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (
            x,
            CgStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        );
    }
    let mut r = rhs;
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let mut it = 0;
    while it < max_iter && rr.sqrt() > rel_tol * bnorm {
        laplacian(edges, &p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
        it += 1;
    }
    remove_mean(&mut x);
    (
        x,
        CgStats {
            iterations: it,
            relative_residual: rr.sqrt() / bnorm,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u32) -> Vec<[u32; 2]> {
        (0..n).map(|k| [k, (k + 1) % n]).collect()
    }

    #[test]
    fn laplacian_solve_on_ring() {
        let edges = ring(50);
        let b: Vec<f64> = (0..50).map(|k| (k as f64 * 0.3).sin()).collect();
        let (x, stats) = solve_laplacian(&edges, &b, 1e-10, 1000);
        assert!(stats.relative_residual <= 1e-10);
        let mut lx = vec![0.0; 50];
        laplacian(&edges, &x, &mut lx);
        let mut bm = b.clone();
        remove_mean(&mut bm);
        for (u, v) in lx.iter().zip(&bm) {
            assert!((u - v).abs() < 1e-8);
        }
        assert!(x.iter().sum::<f64>().abs() < 1e-9);
    }
}
