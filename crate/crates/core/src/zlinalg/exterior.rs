use super::{AlgebraError, IntMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Sparse integer multivector in `Λᵏℤⁿ`.
///
/// Coefficients are keyed by strictly increasing index tuples (1-based);
/// only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    degree: usize,
    rank: usize,
    coeffs: BTreeMap<Vec<usize>, BigInt>,
}

impl ExteriorElement {
    pub fn zero(degree: usize, rank: usize) -> Self {
        ExteriorElement {
            degree,
            rank,
            coeffs: BTreeMap::new(),
        }
    }

    /// The scalar `c` as an element of `Λ⁰ℤⁿ`.
    pub fn scalar(c: BigInt, rank: usize) -> Self {
        let mut e = Self::zero(0, rank);
        e.add_term(&[], c);
        e
    }

    /// A vector of `ℤⁿ` as an element of `Λ¹ℤⁿ`.
    pub fn from_vector(v: &[BigInt]) -> Self {
        let mut e = Self::zero(1, v.len());
        for (i, c) in v.iter().enumerate() {
            e.add_term(&[i + 1], c.clone());
        }
        e
    }

    /// Basis element `e_{i₁}∧…∧e_{iₖ}`; indices must be strictly increasing.
    pub fn basis(indices: &[usize], rank: usize) -> Self {
        let mut e = Self::zero(indices.len(), rank);
        e.add_term(indices, BigInt::from(1));
        e
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn coefficient(&self, indices: &[usize]) -> BigInt {
        self.coeffs.get(indices).cloned().unwrap_or_default()
    }

    /// Adds `c·e_{i₁}∧…∧e_{iₖ}`; `indices` must be strictly increasing.
    pub fn add_term(&mut self, indices: &[usize], c: BigInt) {
        debug_assert_eq!(indices.len(), self.degree);
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.iter().all(|&i| i >= 1 && i <= self.rank));
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(indices.to_vec()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(indices);
        }
    }

    /// Adds `c·e_{i₁}∧…∧e_{iₖ}` for arbitrary distinct indices, with the
    /// permutation sign from sorting; duplicate indices contribute zero.
    pub fn add_unsorted_term(&mut self, indices: &[usize], c: BigInt) {
        let mut idx = indices.to_vec();
        let Some(sign) = sort_with_sign(&mut idx) else {
            return;
        };
        self.add_term(&idx, if sign < 0 { -c } else { c });
    }

    pub fn add(&self, other: &ExteriorElement) -> Result<ExteriorElement, AlgebraError> {
        self.check_rank(other)?;
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> ExteriorElement {
        let mut out = Self::zero(self.degree, self.rank);
        for (k, v) in &self.coeffs {
            out.add_term(k, c * v);
        }
        out
    }

    pub fn neg(&self) -> ExteriorElement {
        self.scale(&BigInt::from(-1))
    }

    fn check_rank(&self, other: &ExteriorElement) -> Result<(), AlgebraError> {
        if self.rank != other.rank {
            return Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    /// Exterior product; bilinear and graded-anticommutative.
    pub fn wedge(&self, other: &ExteriorElement) -> Result<ExteriorElement, AlgebraError> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.degree + other.degree, self.rank);
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let mut idx: Vec<usize> = ka.iter().chain(kb.iter()).copied().collect();
                let Some(sign) = sort_with_sign(&mut idx) else {
                    continue;
                };
                let c = ca * cb;
                out.add_term(&idx, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// The coefficient on `e₁∧…∧eₙ` under the standard isomorphism `Λⁿℤⁿ → ℤ`.
    pub fn top_det(&self) -> Result<BigInt, AlgebraError> {
        if self.degree != self.rank {
            return Err(AlgebraError::DegreeMismatch {
                degree: self.degree,
                rank: self.rank,
            });
        }
        let top: Vec<usize> = (1..=self.rank).collect();
        Ok(self.coefficient(&top))
    }

    /// Push-forward `Λᵏ(T)` along the linear map `T: ℤⁿ → ℤᵐ` given by an
    /// `m×n` matrix: each basis factor `e_i` is sent to column `i` of `T`.
    pub fn push_forward(&self, t: &IntMatrix) -> Result<ExteriorElement, AlgebraError> {
        if t.ncols() != self.rank {
            return Err(AlgebraError::ShapeMismatch(format!(
                "map with {} columns applied to rank-{} multivector",
                t.ncols(),
                self.rank
            )));
        }
        let m = t.nrows();
        let mut out = Self::zero(self.degree, m);
        for (key, c) in &self.coeffs {
            let mut term = ExteriorElement::scalar(c.clone(), m);
            for &i in key {
                term = term.wedge(&ExteriorElement::from_vector(&t.column(i - 1)))?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

/// Sorts `idx` ascending, returning the permutation sign, or `None` if two
/// indices coincide.
fn sort_with_sign(idx: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    // insertion sort, counting inversions
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(indices: &[usize], rank: usize) -> ExteriorElement {
        ExteriorElement::basis(indices, rank)
    }

    #[test]
    fn wedge_of_basis_vectors() {
        let a = e(&[1], 2).wedge(&e(&[2], 2)).unwrap();
        assert_eq!(a.coefficient(&[1, 2]), BigInt::from(1));
    }

    #[test]
    fn wedge_is_alternating() {
        let a = e(&[1], 2).wedge(&e(&[1], 2)).unwrap();
        assert!(a.is_zero());
    }

    #[test]
    fn wedge_shuffle_sign() {
        // (e1∧e3 + e2∧e4) ∧ e2 = e1∧e3∧e2 = −e1∧e2∧e3 in rank 4
        let sum = e(&[1, 3], 4).add(&e(&[2, 4], 4)).unwrap();
        let w = sum.wedge(&e(&[2], 4)).unwrap();
        assert_eq!(w.coefficient(&[1, 2, 3]), BigInt::from(-1));
        assert_eq!(w.coefficient(&[2, 3, 4]), BigInt::from(0));
    }

    #[test]
    fn graded_anticommutativity() {
        let a = e(&[1], 3);
        let b = e(&[2, 3], 3);
        // |a||b| = 2 even: a∧b = b∧a
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        let c = e(&[2], 3);
        assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().neg());
    }

    #[test]
    fn top_det_of_standard_basis() {
        let n = 4;
        let mut w = ExteriorElement::scalar(BigInt::from(1), n);
        for i in 1..=n {
            w = w.wedge(&e(&[i], n)).unwrap();
        }
        assert_eq!(w.top_det().unwrap(), BigInt::from(1));
    }

    #[test]
    fn top_det_transposition_sign() {
        let w = e(&[2], 3)
            .wedge(&e(&[1], 3))
            .unwrap()
            .wedge(&e(&[3], 3))
            .unwrap();
        assert_eq!(w.top_det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn top_det_decomposable_matches_determinant() {
        let m = IntMatrix::from_i64_rows(&[&[2, -1, 0], &[1, 3, 1], &[0, 4, -2]]);
        let mut w = ExteriorElement::scalar(BigInt::from(1), 3);
        for j in 0..3 {
            w = w.wedge(&ExteriorElement::from_vector(&m.column(j))).unwrap();
        }
        assert_eq!(w.top_det().unwrap(), m.determinant().unwrap());
    }

    #[test]
    fn push_forward_identity() {
        let a = e(&[1, 3], 3).add(&e(&[2, 3], 3).scale(&BigInt::from(5))).unwrap();
        assert_eq!(a.push_forward(&IntMatrix::identity(3)).unwrap(), a);
    }

    #[test]
    fn push_forward_swap_is_alternating() {
        let t = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let a = e(&[1, 2], 2);
        assert_eq!(a.push_forward(&t).unwrap(), e(&[1, 2], 2).neg());
    }

    #[test]
    fn push_forward_of_decomposable() {
        let t = IntMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 1]]);
        let v = vec![BigInt::from(1), BigInt::from(-2), BigInt::from(4)];
        let w = vec![BigInt::from(0), BigInt::from(3), BigInt::from(1)];
        let a = ExteriorElement::from_vector(&v)
            .wedge(&ExteriorElement::from_vector(&w))
            .unwrap();
        let tv = t.mul_vector(&v).unwrap();
        let tw = t.mul_vector(&w).unwrap();
        let expected = ExteriorElement::from_vector(&tv)
            .wedge(&ExteriorElement::from_vector(&tw))
            .unwrap();
        assert_eq!(a.push_forward(&t).unwrap(), expected);
    }

    #[test]
    fn push_forward_top_degree_scales_by_det() {
        let t = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let a = e(&[1, 2], 2).scale(&BigInt::from(3));
        let pushed = a.push_forward(&t).unwrap();
        assert_eq!(
            pushed.top_det().unwrap(),
            BigInt::from(3) * t.determinant().unwrap()
        );
    }
}
