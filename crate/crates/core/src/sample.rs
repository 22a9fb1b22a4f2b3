//! Seeded random generators for quaternions, vectors and matrices, used
//! by the verification suites and the CLI.

use rand::Rng;

use crate::linalg::{QMatrix, QVector};
use crate::quat::Quaternion;

/// A quaternion with components uniform in [-scale, scale].
pub fn random_quaternion<R: Rng>(rng: &mut R, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
    )
}

/// A quaternion of exactly the given norm (uniform direction).
pub fn random_quaternion_with_norm<R: Rng>(rng: &mut R, norm: f64) -> Quaternion {
    loop {
        let q = random_quaternion(rng, 1.0);
        let n = q.norm();
        if n > 1e-3 {
            return Quaternion::new(q.w / n, q.x / n, q.y / n, q.z / n) * norm;
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, scale: f64) -> QVector {
    QVector::from_entries((0..n).map(|_| random_quaternion(rng, scale)).collect())
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> QMatrix {
    let mut m = QMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] = random_quaternion(rng, scale);
        }
    }
    m
}

/// A random matrix of the requested rank r < n, built as a product of an
/// n×r and an r×n factor (embedded in square matrices).
pub fn random_matrix_with_rank<R: Rng>(rng: &mut R, n: usize, rank: usize, scale: f64) -> QMatrix {
    assert!(rank <= n);
    let mut left = QMatrix::zeros(n);
    let mut right = QMatrix::zeros(n);
    for r in 0..n {
        for c in 0..rank {
            left[(r, c)] = random_quaternion(rng, scale);
            right[(c, r)] = random_quaternion(rng, scale);
        }
    }
    &left * &right
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_under_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_matrix(&mut a, 3, 1.0), random_matrix(&mut b, 3, 1.0));
    }

    #[test]
    fn rank_control() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix_with_rank(&mut rng, 4, 2, 1.0);
        assert_eq!(m.rank(None), 2);
        approx::assert_relative_eq!(
            random_quaternion_with_norm(&mut rng, 2.5).norm(),
            2.5,
            epsilon = 1e-12
        );
    }
}
