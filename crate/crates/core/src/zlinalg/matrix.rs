use super::AlgebraError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(rows: usize, cols: Vec<Vec<BigInt>>) -> Self {
        let c = cols.len();
        let mut m = Self::zero(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, v: &[BigInt]) -> Result<Vec<BigInt>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    /// Fraction-free (Bareiss) determinant; square matrices only.
    pub fn determinant(&self) -> Result<BigInt, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row(a) += q * row(b)
    fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(a, j) + q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col(a) += q * col(b)
    fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, a) + q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }
}

/// Smith normal form `U·M·V = D` with unimodular `U`, `V`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
    /// Positive elementary divisors `d₁ | d₂ | … | d_rank`.
    pub divisors: Vec<BigInt>,
}

impl SnfResult {
    /// Product of divisors > 1; the torsion order of coker(M) when the
    /// cokernel is finite on the divisor part.
    pub fn torsion_order(&self) -> BigInt {
        self.divisors
            .iter()
            .filter(|d| !d.is_one())
            .product::<BigInt>()
            .max(BigInt::one())
    }
}

/// Computes the Smith normal form of `m`, with smallest-absolute-value
/// pivoting to limit entry swell.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // move the smallest nonzero entry of the trailing submatrix to (t,t)
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d.get(i, j).is_zero()
                    && pivot
                        .map(|(pi, pj)| d.get(i, j).abs() < d.get(pi, pj).abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // clear row t and column t; restart if a remainder becomes the new pivot
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !d.get(i, t).is_zero() {
                    let q = -round_div(d.get(i, t), d.get(t, t));
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !d.get(t, j).is_zero() {
                    let q = -round_div(d.get(t, j), d.get(t, t));
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (t + 1..rows).all(|i| d.get(i, t).is_zero())
                && (t + 1..cols).all(|j| d.get(t, j).is_zero())
            {
                break;
            }
        }

        // enforce divisibility: pivot must divide every remaining entry
        let mut redo = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(d.get(i, j) % d.get(t, t)).is_zero() {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                    redo = true;
                    break 'outer;
                }
            }
        }
        if redo {
            continue; // re-pivot at the same t
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let rank = t;
    let divisors = (0..rank).map(|i| d.get(i, i).clone()).collect();
    SnfResult {
        u,
        v,
        d,
        rank,
        divisors,
    }
}

/// Rounded division, so the remainder has absolute value ≤ |b|/2.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) != (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// A ℤ-basis for `ker(M: ℤᶜ → ℤʳ)`, read off the columns of `V` past the rank.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank..m.ncols()).map(|j| snf.v.column(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let snf = smith_normal_form(m);
        let umv = snf.u.mul(m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(umv, snf.d, "U·M·V != D");
        assert_eq!(snf.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().unwrap().abs(), BigInt::one());
        for w in snf.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisor chain broken");
        }
        for d in &snf.divisors {
            assert!(d.is_positive());
        }
        snf
    }

    #[test]
    fn snf_already_diagonal() {
        let m = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 6]]);
        let snf = check_snf(&m);
        assert_eq!(snf.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let snf = check_snf(&m);
        assert_eq!(snf.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(3, 2);
        let snf = check_snf(&m);
        assert_eq!(snf.rank, 0);
        assert!(snf.divisors.is_empty());
        // zero boundary must leave the basis untouched
        assert_eq!(snf.u, IntMatrix::identity(3));
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let m = IntMatrix::from_i64_rows(&[&[5]]);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn kernel_of_zero_map() {
        let m = IntMatrix::zero(1, 2);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        let d = IntMatrix::from_columns(2, basis.clone()).determinant().unwrap();
        assert_eq!(d.abs(), BigInt::one());
    }

    #[test]
    fn kernel_of_sum_map() {
        let m = IntMatrix::from_i64_rows(&[&[1, 1]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(m.mul_vector(v).unwrap(), vec![BigInt::zero()]);
        // primitive: gcd of entries is 1
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn determinant_matches_product_of_divisors() {
        let m = IntMatrix::from_i64_rows(&[&[4, -2, 7], &[0, 3, 1], &[5, 5, -6]]);
        let snf = check_snf(&m);
        let det = m.determinant().unwrap();
        let prod: BigInt = snf.divisors.iter().product();
        assert_eq!(det.abs(), prod);
    }

    #[test]
    fn round_div_small_remainders() {
        for a in -20i64..=20 {
            for b in [-7i64, -3, 2, 5] {
                let q = round_div(&BigInt::from(a), &BigInt::from(b));
                let r = BigInt::from(a) - &q * BigInt::from(b);
                assert!(r.abs() * BigInt::from(2) <= BigInt::from(b.abs() + 1));
            }
        }
    }
}
