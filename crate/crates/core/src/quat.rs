//! Quaternion helpers in `(w, i, j, k)` component order.

pub type Quat = [f64; 4];

pub const ONE: Quat = [1.0, 0.0, 0.0, 0.0];
pub const I: Quat = [0.0, 1.0, 0.0, 0.0];
pub const J: Quat = [0.0, 0.0, 1.0, 0.0];
pub const K: Quat = [0.0, 0.0, 0.0, 1.0];

/// Hamilton product `a b`.
pub fn mul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn conj(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Rotation matrix of a unit quaternion, acting on column vectors.
pub fn rotation(q: &Quat) -> [[f64; 3]; 3] {
    let [w, x, y, z] = *q;
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Left-invariant frame `e_j(x) = x i_j` of the tangent space of the unit
/// 3-sphere at `x`, as ambient vectors.
pub fn s3_frame(x: &Quat) -> [Quat; 3] {
    [mul(x, &I), mul(x, &J), mul(x, &K)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_unit(rng: &mut ChaCha8Rng) -> Quat {
        let mut q = [0.0; 4];
        for v in q.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        q.map(|v| v / n)
    }

    #[test]
    fn unit_relations() {
        assert_eq!(mul(&I, &J), K);
        assert_eq!(mul(&J, &K), I);
        assert_eq!(mul(&K, &I), J);
        assert_eq!(mul(&I, &I), [-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn frame_at_identity_is_coordinate_axes() {
        assert_eq!(s3_frame(&ONE), [I, J, K]);
    }

    #[test]
    fn frame_is_orthonormal_and_tangent() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..100 {
            let x = random_unit(&mut rng);
            let e = s3_frame(&x);
            for i in 0..3 {
                let tangent: f64 = (0..4).map(|k| e[i][k] * x[k]).sum();
                assert!(tangent.abs() < 1e-14);
                for j in 0..3 {
                    let d: f64 = (0..4).map(|k| e[i][k] * e[j][k]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((d - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rotation_matches_sandwich_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let q = random_unit(&mut rng);
            let r = rotation(&q);
            for (a, unit) in [I, J, K].iter().enumerate() {
                let v = mul(&mul(&q, unit), &conj(&q));
                for b in 0..3 {
                    assert!((v[b + 1] - r[b][a]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn half_turn_about_first_axis() {
        let r = rotation(&I);
        // R e3 and R e1
        assert_eq!([r[0][2], r[1][2], r[2][2]], [0.0, 0.0, -1.0]);
        assert_eq!([r[0][0], r[1][0], r[2][0]], [1.0, 0.0, 0.0]);
    }
}
