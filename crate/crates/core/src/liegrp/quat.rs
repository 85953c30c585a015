use super::LieError;
use nalgebra::Matrix3;
use rand::Rng;
use std::ops::{Add, Mul, Neg, Sub};

/// A quaternion `r + i·e₁ + j·e₂ + k·e₃`; group elements are kept at unit
/// norm via `normalize`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat {
    pub r: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

pub const ONE: Quat = Quat {
    r: 1.0,
    i: 0.0,
    j: 0.0,
    k: 0.0,
};

impl Quat {
    pub fn new(r: f64, i: f64, j: f64, k: f64) -> Quat {
        Quat { r, i, j, k }
    }

    pub fn one() -> Quat {
        ONE
    }

    pub fn minus_one() -> Quat {
        -ONE
    }

    pub fn unit_i() -> Quat {
        Quat::new(0.0, 1.0, 0.0, 0.0)
    }

    pub fn unit_j() -> Quat {
        Quat::new(0.0, 0.0, 1.0, 0.0)
    }

    pub fn unit_k() -> Quat {
        Quat::new(0.0, 0.0, 0.0, 1.0)
    }

    /// Pure-imaginary quaternion from a 3-vector.
    pub fn pure(v: [f64; 3]) -> Quat {
        Quat::new(0.0, v[0], v[1], v[2])
    }

    pub fn imag(&self) -> [f64; 3] {
        [self.i, self.j, self.k]
    }

    pub fn norm(&self) -> f64 {
        (self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k).sqrt()
    }

    pub fn normalize(&self) -> Quat {
        let n = self.norm();
        Quat::new(self.r / n, self.i / n, self.j / n, self.k / n)
    }

    pub fn conj(&self) -> Quat {
        Quat::new(self.r, -self.i, -self.j, -self.k)
    }

    /// Inverse of a unit quaternion.
    pub fn inverse(&self) -> Quat {
        self.conj()
    }

    pub fn dot(&self, other: &Quat) -> f64 {
        self.r * other.r + self.i * other.i + self.j * other.j + self.k * other.k
    }

    pub fn dist(&self, other: &Quat) -> f64 {
        (*self - *other).norm()
    }

    /// Conjugation action `q v q⁻¹` on a pure-imaginary `v`.
    pub fn ad(&self, v: Quat) -> Quat {
        *self * v * self.conj()
    }

    /// Exponential of a pure-imaginary quaternion, a unit quaternion.
    pub fn exp_pure(v: [f64; 3]) -> Quat {
        let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if theta < 1e-300 {
            return ONE;
        }
        let s = theta.sin() / theta;
        Quat::new(theta.cos(), s * v[0], s * v[1], s * v[2])
    }

    /// Logarithm of a unit quaternion, a pure-imaginary 3-vector in the
    /// principal branch.
    pub fn log(&self) -> [f64; 3] {
        let q = self.normalize();
        let im_norm = (q.i * q.i + q.j * q.j + q.k * q.k).sqrt();
        if im_norm < 1e-15 {
            // near ±1: log of −1 is ill-defined, pick the i-axis
            if q.r < 0.0 {
                return [std::f64::consts::PI, 0.0, 0.0];
            }
            return [0.0, 0.0, 0.0];
        }
        let theta = im_norm.atan2(q.r);
        let s = theta / im_norm;
        [s * q.i, s * q.j, s * q.k]
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.r * o.r - self.i * o.i - self.j * o.j - self.k * o.k,
            self.r * o.i + self.i * o.r + self.j * o.k - self.k * o.j,
            self.r * o.j - self.i * o.k + self.j * o.r + self.k * o.i,
            self.r * o.k + self.i * o.j - self.j * o.i + self.k * o.r,
        )
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.r + o.r, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.r - o.r, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.r, -self.i, -self.j, -self.k)
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, s: f64) -> Quat {
        Quat::new(self.r * s, self.i * s, self.j * s, self.k * s)
    }
}

/// An n-tuple of unit quaternions, a point of `Gⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QTuple(pub Vec<Quat>);

impl QTuple {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn normalize(&self) -> QTuple {
        QTuple(self.0.iter().map(|q| q.normalize()).collect())
    }
}

/// Right-trivialized tangent vector at a point of `Gⁿ`: one pure-imaginary
/// 3-vector per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector(pub Vec<[f64; 3]>);

impl TangentVector {
    pub fn zero(n: usize) -> TangentVector {
        TangentVector(vec![[0.0; 3]; n])
    }

    pub fn basis(n: usize, factor: usize, axis: usize) -> TangentVector {
        let mut t = Self::zero(n);
        t.0[factor][axis] = 1.0;
        t
    }
}

/// Element of SO(3) as a rotation matrix.
pub type Rot3 = Matrix3<f64>;

/// The double covering Sp(1) → SO(3): the conjugation action on pure
/// imaginaries. `covering_map(−q) = covering_map(q)`.
pub fn covering_map(q: &Quat) -> Result<Rot3, LieError> {
    let norm = q.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(LieError::NotUnit { norm });
    }
    let q = q.normalize();
    let (r, i, j, k) = (q.r, q.i, q.j, q.k);
    Ok(Matrix3::new(
        1.0 - 2.0 * (j * j + k * k),
        2.0 * (i * j - k * r),
        2.0 * (i * k + j * r),
        2.0 * (i * j + k * r),
        1.0 - 2.0 * (i * i + k * k),
        2.0 * (j * k - i * r),
        2.0 * (i * k - j * r),
        2.0 * (j * k + i * r),
        1.0 - 2.0 * (i * i + j * j),
    ))
}

/// One of the two unit-quaternion lifts of a rotation (Shepperd's method);
/// the other lift is its negative.
pub fn lift_rotation(m: &Rot3) -> Quat {
    let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    let q = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        Quat::new(
            0.25 * s,
            (m[(2, 1)] - m[(1, 2)]) / s,
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(1, 0)] - m[(0, 1)]) / s,
        )
    } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
        let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
        Quat::new(
            (m[(2, 1)] - m[(1, 2)]) / s,
            0.25 * s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
        )
    } else if m[(1, 1)] > m[(2, 2)] {
        let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
        Quat::new(
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            0.25 * s,
            (m[(1, 2)] + m[(2, 1)]) / s,
        )
    } else {
        let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
        Quat::new(
            (m[(1, 0)] - m[(0, 1)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
            (m[(1, 2)] + m[(2, 1)]) / s,
            0.25 * s,
        )
    };
    q.normalize()
}

/// Haar-uniform unit quaternion: a normalized 4-dimensional Gaussian.
pub fn random_unit_quat<R: Rng>(rng: &mut R) -> Quat {
    loop {
        let v: [f64; 4] = [
            gaussian(rng),
            gaussian(rng),
            gaussian(rng),
            gaussian(rng),
        ];
        let q = Quat::new(v[0], v[1], v[2], v[3]);
        if q.norm() > 1e-6 {
            return q.normalize();
        }
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quaternion_table() {
        let (i, j, k) = (Quat::unit_i(), Quat::unit_j(), Quat::unit_k());
        assert!((i * j).dist(&k) < 1e-15);
        assert!((j * k).dist(&i) < 1e-15);
        assert!((i * i).dist(&Quat::minus_one()) < 1e-15);
    }

    #[test]
    fn exp_log_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q = random_unit_quat(&mut rng);
            let back = Quat::exp_pure(q.log());
            // the principal branch has angle in (0, π), so it recovers q itself
            assert!(back.dist(&q) < 1e-9);
        }
    }

    #[test]
    fn covering_map_of_one_is_identity() {
        let r = covering_map(&Quat::one()).unwrap();
        assert!((r - Matrix3::identity()).norm() < 1e-12);
    }

    #[test]
    fn covering_map_of_i_is_pi_rotation() {
        let r = covering_map(&Quat::unit_i()).unwrap();
        let expected = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, -1.0));
        assert!((r - expected).norm() < 1e-12);
    }

    #[test]
    fn covering_map_is_orthogonal_and_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let q = random_unit_quat(&mut rng);
            let r = covering_map(&q).unwrap();
            assert!((r.transpose() * r - Matrix3::identity()).norm() < 1e-9);
            assert!((r.determinant() - 1.0).abs() < 1e-9);
            let r_neg = covering_map(&-q).unwrap();
            assert!((r - r_neg).norm() < 1e-12);
        }
    }

    #[test]
    fn covering_map_homomorphism_and_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = random_unit_quat(&mut rng);
            let b = random_unit_quat(&mut rng);
            let lhs = covering_map(&(a * b)).unwrap();
            let rhs = covering_map(&a).unwrap() * covering_map(&b).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
            let lift = lift_rotation(&covering_map(&a).unwrap());
            assert!(lift.dist(&a).min(lift.dist(&-a)) < 1e-9);
        }
    }

    #[test]
    fn rejects_non_unit() {
        assert!(covering_map(&Quat::new(2.0, 0.0, 0.0, 0.0)).is_err());
    }
}
