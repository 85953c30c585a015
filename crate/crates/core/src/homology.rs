//! Invariants of the presentation 2-complex and the homological
//! certificates behind both existence theorems: boundary map, Betti
//! numbers, torsion, the H₂ generator σ, the 2-form μ, the hypothesis
//! checks, the relator-change construction, and the intersection number κ.

use crate::words::{
    abelianize, express_as_commutators, lambda_form, multiply, substitute, Word, WordError,
};
use crate::zlinalg::{
    kernel_basis, smith_normal_form, AlgebraError, ExteriorElement, IntMatrix, SnfResult,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("operation requires b2 = {expected}, presentation has b2 = {got}")]
    WrongB2 { expected: usize, got: usize },
    #[error("need {expected} loops gamma, got {got}")]
    GammaCount { expected: usize, got: usize },
    #[error("eta has length {got}, expected one entry per relator ({expected})")]
    EtaLength { expected: usize, got: usize },
    #[error("eta pairs to zero with sigma; the class it represents cannot satisfy the hypothesis")]
    EtaPairsToZero,
    #[error("expected {expected} words, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A finite presentation `⟨x₁,…,x_n | w₁,…,w_s⟩`; also stands for its
/// presentation 2-complex.
#[derive(Debug, Clone)]
pub struct Presentation {
    n: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(n: usize, relators: Vec<Word>) -> Result<Self, WordError> {
        assert!(n >= 1, "at least one generator");
        for r in &relators {
            if r.rank() != n {
                return Err(WordError::RankMismatch {
                    left: n,
                    right: r.rank(),
                });
            }
        }
        Ok(Presentation { n, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.n
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

/// Homological profile of the 2-complex: Betti numbers, torsion, the
/// boundary matrix with its SNF, and the projection `L = ℤⁿ → A₀ = H₁/T`.
#[derive(Debug, Clone)]
pub struct HomologyProfile {
    pub b1: usize,
    pub b2: usize,
    pub torsion_order: BigInt,
    pub boundary: IntMatrix,
    pub snf: SnfResult,
    /// `b1 × n` matrix expressing the quotient `ℤⁿ → A₀` in the SNF basis.
    pub free_quotient_map: IntMatrix,
}

/// Primitive generator of `H₂(X) ≈ ℤ`, as a coefficient vector over relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaClass {
    pub coefficients: Vec<BigInt>,
}

/// The skew form `μ ∈ Λ²A₀` induced by cup product against σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuForm {
    pub mu: ExteriorElement,
}

/// Output of the relator-change construction: new relator words `w_j′`,
/// target signs `ε_j`, a commutator decomposition of `w₀′`, and the ℤ/2
/// class η the signs were derived from.
#[derive(Debug, Clone)]
pub struct Thm2Constraints {
    pub v_words: Vec<Word>,
    pub epsilons: Vec<i8>,
    pub commutator_pairs: Vec<(Word, Word)>,
    pub eta: Vec<u8>,
}

/// Decision and certificate for the `b₂ = 0` existence theorem.
#[derive(Debug, Clone)]
pub struct Thm1Check {
    pub holds: bool,
    pub reason: String,
    /// `|T|·det(h̄₁,…,h̄_r)` in `A₀`, defined when the loops span `A₀⊗ℚ`;
    /// the predicted mapping degree is `±(this)^m` for a rank-`m` group.
    pub degree_base: Option<BigInt>,
}

/// Decision and certificate for the `b₂ = 1` existence theorem.
#[derive(Debug, Clone)]
pub struct Thm2Check {
    pub holds: bool,
    pub reason: String,
    /// `|T|·det(μ∧γ̄₁∧…∧γ̄_{r−2})`; nonzero exactly when the hypothesis holds.
    pub prediction: Option<BigInt>,
}

/// Computes the boundary matrix (column i = abelianized relator i), its
/// SNF, and the derived profile.
pub fn analyze(p: &Presentation) -> HomologyProfile {
    let n = p.generator_count();
    let s = p.relators().len();
    let boundary = IntMatrix::from_columns(
        n,
        p.relators().iter().map(|r| abelianize(r).to_bigint()).collect(),
    );
    let snf = smith_normal_form(&boundary);
    let rank = snf.rank;
    let b1 = n - rank;
    let b2 = s - rank;
    let torsion_order = snf.torsion_order();
    // x ∈ ℤⁿ has coordinates U·x in the SNF basis; the last b1 of them
    // survive in A₀ = H₁/T.
    let mut free_quotient_map = IntMatrix::zero(b1, n);
    for i in 0..b1 {
        for j in 0..n {
            free_quotient_map.set(i, j, snf.u.get(rank + i, j).clone());
        }
    }
    HomologyProfile {
        b1,
        b2,
        torsion_order,
        boundary,
        snf,
        free_quotient_map,
    }
}

/// Primitive kernel vector of ∂ on relator space, first nonzero
/// coefficient positive. Requires `b2 = 1`.
pub fn sigma_generator(profile: &HomologyProfile) -> Result<SigmaClass, HomologyError> {
    if profile.b2 != 1 {
        return Err(HomologyError::WrongB2 {
            expected: 1,
            got: profile.b2,
        });
    }
    let basis = kernel_basis(&profile.boundary);
    debug_assert_eq!(basis.len(), 1);
    let mut coefficients = basis.into_iter().next().unwrap();
    if let Some(first) = coefficients.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut coefficients {
                *c = -&*c;
            }
        }
    }
    Ok(SigmaClass { coefficients })
}

/// A word in `F_n` whose relator combination abelianizes to σ: the ordered
/// product `∏ᵢ wᵢ^{σᵢ}`.
fn sigma_word(p: &Presentation, sigma: &SigmaClass) -> Result<Word, HomologyError> {
    let mut out = Word::identity(p.generator_count());
    for (r, c) in p.relators().iter().zip(&sigma.coefficients) {
        let e: i64 = i64::try_from(c).expect("sigma coefficient fits i64");
        out = multiply(&out, &r.pow(e))?;
    }
    Ok(out)
}

/// The 2-form μ: the linearization of a σ-combination of relators, pushed
/// forward to `A₀`. Requires `b2 = 1`.
pub fn mu_form(
    p: &Presentation,
    profile: &HomologyProfile,
    sigma: &SigmaClass,
) -> Result<MuForm, HomologyError> {
    let w0 = sigma_word(p, sigma)?;
    let lambda = lambda_form(&w0)?;
    let mu = lambda.push_forward(&profile.free_quotient_map)?;
    Ok(MuForm { mu })
}

fn gamma_images(
    profile: &HomologyProfile,
    gammas: &[Word],
) -> Result<Vec<Vec<BigInt>>, HomologyError> {
    gammas
        .iter()
        .map(|g| {
            profile
                .free_quotient_map
                .mul_vector(&abelianize(g).to_bigint())
                .map_err(HomologyError::from)
        })
        .collect()
}

/// Hypothesis check for the `b₂ = 0` theorem: decides whether the loops
/// map to ℚ-linearly independent homology classes, and when they span,
/// computes the degree certificate.
pub fn check_thm1(p: &Presentation, gammas: &[Word]) -> Thm1Check {
    let profile = analyze(p);
    if profile.b2 != 0 {
        return Thm1Check {
            holds: false,
            reason: format!("b2 = {} (need b2 = 0)", profile.b2),
            degree_base: None,
        };
    }
    let r = gammas.len();
    if r == 0 {
        return Thm1Check {
            holds: false,
            reason: "no loops given (need r >= 1)".into(),
            degree_base: None,
        };
    }
    let m = IntMatrix::from_columns(
        p.generator_count(),
        gammas.iter().map(|g| abelianize(g).to_bigint()).collect(),
    );
    // independence over ℚ together with triviality in H₁⊗ℚ of the relator
    // span: rank of (boundary | gammas) must be rank(∂) + r
    let combined_rank = {
        let n = p.generator_count();
        let mut cols = Vec::new();
        for j in 0..profile.boundary.ncols() {
            cols.push(profile.boundary.column(j));
        }
        for j in 0..m.ncols() {
            cols.push(m.column(j));
        }
        smith_normal_form(&IntMatrix::from_columns(n, cols)).rank
    };
    if combined_rank != profile.snf.rank + r {
        return Thm1Check {
            holds: false,
            reason: "loops are linearly dependent in H1(X;Q)".into(),
            degree_base: None,
        };
    }
    let degree_base = if r == profile.b1 {
        let images = gamma_images(&profile, gammas).expect("shapes agree");
        let det = IntMatrix::from_columns(profile.b1, images)
            .determinant()
            .expect("square");
        Some(&profile.torsion_order * det)
    } else {
        None
    };
    Thm1Check {
        holds: true,
        reason: "b2 = 0 and loops independent in H1(X;Q)".into(),
        degree_base,
    }
}

/// The predicted mapping degree `±(base)^m` for a compact group of rank `m`.
pub fn predicted_degree(base: &BigInt, rank_m: u32) -> BigInt {
    base.pow(rank_m)
}

/// Hypothesis check for the `b₂ = 1` theorem: `μ∧γ̄₁∧…∧γ̄_{r−2} ≠ 0` with
/// `r = b1`. Extra loops beyond `r − 2` are ignored.
pub fn check_thm2(p: &Presentation, gammas: &[Word]) -> Thm2Check {
    let profile = analyze(p);
    if profile.b2 != 1 {
        return Thm2Check {
            holds: false,
            reason: format!("b2 = {} (need b2 = 1)", profile.b2),
            prediction: None,
        };
    }
    let r = profile.b1;
    if r < 2 {
        return Thm2Check {
            holds: false,
            reason: format!("b1 = {r} (need b1 >= 2)"),
            prediction: None,
        };
    }
    let needed = r - 2;
    if gammas.len() < needed {
        return Thm2Check {
            holds: false,
            reason: format!("need {} loops gamma, got {}", needed, gammas.len()),
            prediction: None,
        };
    }
    let sigma = sigma_generator(&profile).expect("b2 = 1");
    let mu = mu_form(p, &profile, &sigma).expect("b2 = 1");
    let images = match gamma_images(&profile, &gammas[..needed]) {
        Ok(v) => v,
        Err(e) => {
            return Thm2Check {
                holds: false,
                reason: e.to_string(),
                prediction: None,
            }
        }
    };
    let mut wedge = mu.mu.clone();
    for im in &images {
        wedge = wedge
            .wedge(&ExteriorElement::from_vector(im))
            .expect("same rank");
    }
    let det = wedge.top_det().expect("top degree");
    let prediction = &profile.torsion_order * &det;
    if det.is_zero() {
        Thm2Check {
            holds: false,
            reason: "wedge mu ∧ gamma_1 ∧ … vanishes".into(),
            prediction: Some(prediction),
        }
    } else {
        Thm2Check {
            holds: true,
            reason: "b2 = 1 and wedge nonzero".into(),
            prediction: Some(prediction),
        }
    }
}

/// Elementary Nielsen moves, recorded while column-reducing a unimodular
/// matrix to the identity.
#[derive(Debug, Clone, Copy)]
enum ColOp {
    /// col(i) += c · col(j)
    Add { i: usize, j: usize, c: i64 },
    Swap { i: usize, j: usize },
    Neg { i: usize },
}

impl ColOp {
    fn inverse(self) -> ColOp {
        match self {
            ColOp::Add { i, j, c } => ColOp::Add { i, j, c: -c },
            other => other,
        }
    }

    /// Images of the generators under the Nielsen automorphism whose
    /// abelianization matrix is this elementary matrix.
    fn automorphism_images(self, t: usize) -> Vec<Word> {
        let mut images: Vec<Word> = (1..=t)
            .map(|k| Word::generator(k, t).expect("in range"))
            .collect();
        match self {
            ColOp::Add { i, j, c } => {
                let yj = Word::generator(j + 1, t).expect("in range");
                images[i] = multiply(&images[i], &yj.pow(c)).expect("same rank");
            }
            ColOp::Swap { i, j } => images.swap(i, j),
            ColOp::Neg { i } => images[i] = images[i].inverse(),
        }
        images
    }
}

fn apply_col_op(m: &mut IntMatrix, op: ColOp) {
    match op {
        ColOp::Add { i, j, c } => {
            for r in 0..m.nrows() {
                let v = m.get(r, i) + BigInt::from(c) * m.get(r, j);
                m.set(r, i, v);
            }
        }
        ColOp::Swap { i, j } => {
            for r in 0..m.nrows() {
                let a = m.get(r, i).clone();
                let b = m.get(r, j).clone();
                m.set(r, i, b);
                m.set(r, j, a);
            }
        }
        ColOp::Neg { i } => {
            for r in 0..m.nrows() {
                let v = -m.get(r, i);
                m.set(r, i, v);
            }
        }
    }
}

/// Column-reduces the unimodular `m` to the identity, returning the ops
/// in application order.
fn column_reduce_unimodular(m: &IntMatrix) -> Vec<ColOp> {
    let t = m.nrows();
    assert_eq!(t, m.ncols());
    let mut a = m.clone();
    let mut ops = vec![];
    let emit = |a: &mut IntMatrix, ops: &mut Vec<ColOp>, op: ColOp| {
        apply_col_op(a, op);
        ops.push(op);
    };
    for r in 0..t {
        // Euclid on row r over columns >= r
        loop {
            let nonzero: Vec<usize> = (r..t).filter(|&j| !a.get(r, j).is_zero()).collect();
            assert!(!nonzero.is_empty(), "matrix not unimodular");
            let jmin = *nonzero
                .iter()
                .min_by_key(|&&j| a.get(r, j).abs())
                .unwrap();
            if nonzero.len() == 1 {
                if jmin != r {
                    emit(&mut a, &mut ops, ColOp::Swap { i: r, j: jmin });
                }
                break;
            }
            for j in nonzero {
                if j == jmin {
                    continue;
                }
                let q = a.get(r, j) / a.get(r, jmin);
                let c = i64::try_from(&-q).expect("quotient fits i64");
                if c != 0 {
                    emit(&mut a, &mut ops, ColOp::Add { i: j, j: jmin, c });
                }
            }
        }
        if a.get(r, r).is_negative() {
            emit(&mut a, &mut ops, ColOp::Neg { i: r });
        }
        assert!(a.get(r, r).is_one(), "pivot not ±1; matrix not unimodular");
        // clear the rest of row r
        for j in 0..t {
            if j != r && !a.get(r, j).is_zero() {
                let c = i64::try_from(&-a.get(r, j).clone()).expect("entry fits i64");
                emit(&mut a, &mut ops, ColOp::Add { i: j, j: r, c });
            }
        }
    }
    debug_assert_eq!(a, IntMatrix::identity(t));
    ops
}

/// Images `α(y_1),…,α(y_t)` of a free-group automorphism realizing the
/// unimodular matrix `m` (column j = abelianization of the j-th image),
/// together with the images of `α⁻¹` built from the same op sequence.
fn realize_unimodular_with_inverse(m: &IntMatrix) -> (Vec<Word>, Vec<Word>) {
    let t = m.nrows();
    let ops = column_reduce_unimodular(m);
    let identity = |t: usize| -> Vec<Word> {
        (1..=t)
            .map(|k| Word::generator(k, t).expect("in range"))
            .collect()
    };
    let compose = |images: Vec<Word>, phi: &[Word]| -> Vec<Word> {
        images
            .iter()
            .map(|w| substitute(w, phi).expect("same rank"))
            .collect()
    };
    // m · O_1 ⋯ O_k = I  ⇒  α = φ(O_k⁻¹) ∘ ⋯ ∘ φ(O_1⁻¹)
    let mut images = identity(t);
    for op in &ops {
        images = compose(images, &op.inverse().automorphism_images(t));
    }
    // α⁻¹ = φ(O_1) ∘ ⋯ ∘ φ(O_k), same elementary factors reversed
    let mut inverse = identity(t);
    for op in ops.iter().rev() {
        inverse = compose(inverse, &op.automorphism_images(t));
    }
    (images, inverse)
}

/// Completes σ to a unimodular matrix with σ as first column.
fn complete_sigma(sigma: &SigmaClass) -> IntMatrix {
    let t = sigma.coefficients.len();
    let col = IntMatrix::from_columns(t, vec![sigma.coefficients.clone()]);
    let snf = smith_normal_form(&col);
    debug_assert!(snf.divisors == vec![BigInt::one()], "sigma not primitive");
    // U·σ = e₁, so M := U⁻¹ has first column σ
    unimodular_inverse(&snf.u)
}

/// Inverse of a unimodular integer matrix, via column reduction.
fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let t = m.nrows();
    let ops = column_reduce_unimodular(m);
    // m · O_1 ⋯ O_k = I  ⇒  m⁻¹ = O_1 ⋯ O_k
    let mut inv = IntMatrix::identity(t);
    for &op in &ops {
        // right-multiplying by the elementary matrix is the column op
        apply_col_op(&mut inv, op);
    }
    inv
}

/// The relator-change construction: picks `M ∈ GL(ℤ)` with first column σ,
/// realizes it by a free-group automorphism, rewrites the relators to
/// `w_j′`, and derives the target signs `ε_j` from η.
pub fn build_thm2_constraints(
    p: &Presentation,
    profile: &HomologyProfile,
    sigma: &SigmaClass,
    eta: Option<&[u8]>,
) -> Result<Thm2Constraints, HomologyError> {
    if profile.b2 != 1 {
        return Err(HomologyError::WrongB2 {
            expected: 1,
            got: profile.b2,
        });
    }
    let t = p.relators().len();

    let eta: Vec<u8> = match eta {
        Some(e) => {
            if e.len() != t {
                return Err(HomologyError::EtaLength {
                    expected: t,
                    got: e.len(),
                });
            }
            e.iter().map(|&x| x % 2).collect()
        }
        None => synthesize_eta(sigma),
    };
    let pairing: u32 = sigma
        .coefficients
        .iter()
        .zip(&eta)
        .map(|(c, &h)| (c.mod_floor(&BigInt::from(2)) == BigInt::one()) as u32 * h as u32)
        .sum::<u32>()
        % 2;
    if pairing == 0 {
        return Err(HomologyError::EtaPairsToZero);
    }

    let m = complete_sigma(sigma);
    let (alpha_images, alpha_inverse) = realize_unimodular_with_inverse(&m);

    // two-way check: α really is an automorphism (inverse roundtrip) and
    // its abelianization matrix is M
    verify_automorphism(&alpha_images, &alpha_inverse, &m);

    let v_words: Vec<Word> = alpha_images
        .iter()
        .map(|w| substitute(w, p.relators()).expect("rank matches"))
        .collect();

    // ε_j = δ⁻¹(Σᵢ m_{ij} η_i)
    let epsilons: Vec<i8> = (0..t)
        .map(|j| {
            let parity: u32 = (0..t)
                .map(|i| {
                    ((m.get(i, j).mod_floor(&BigInt::from(2)) == BigInt::one()) as u32)
                        * eta[i] as u32
                })
                .sum::<u32>()
                % 2;
            if parity == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    debug_assert_eq!(epsilons[0], -1);

    let commutator_pairs = express_as_commutators(&v_words[0])?;
    Ok(Thm2Constraints {
        v_words,
        epsilons,
        commutator_pairs,
        eta,
    })
}

/// Lexicographically least η with `Σσᵢηᵢ = 1` in ℤ/2: a single 1 at the
/// last index where σ is odd.
fn synthesize_eta(sigma: &SigmaClass) -> Vec<u8> {
    let t = sigma.coefficients.len();
    let mut eta = vec![0u8; t];
    let last_odd = sigma
        .coefficients
        .iter()
        .rposition(|c| c.mod_floor(&BigInt::from(2)) == BigInt::one())
        .expect("primitive vector has an odd coordinate");
    eta[last_odd] = 1;
    eta
}

fn verify_automorphism(images: &[Word], inverse: &[Word], m: &IntMatrix) {
    let t = images.len();
    for (j, w) in images.iter().enumerate() {
        let ab = abelianize(w);
        for i in 0..t {
            assert_eq!(
                BigInt::from(ab.0[i]),
                *m.get(i, j),
                "abelianization of image {j} disagrees with M"
            );
        }
    }
    for (j, w) in inverse.iter().enumerate() {
        let round = substitute(w, images).expect("same rank");
        assert_eq!(
            round,
            Word::generator(j + 1, t).unwrap(),
            "alpha inverse check failed"
        );
    }
}

/// `κ = det(λ ∧ v̄₁ ∧ … ∧ v̄_{n−2})` with `λ = Σℓ ūℓ∧v̄ℓ` from the
/// commutator pairs.
pub fn kappa(
    v0_pairs: &[(Word, Word)],
    v_rest: &[Word],
    n: usize,
) -> Result<BigInt, HomologyError> {
    if v_rest.len() + 2 != n {
        return Err(HomologyError::ArityMismatch {
            expected: n.saturating_sub(2),
            got: v_rest.len(),
        });
    }
    let mut lambda = ExteriorElement::zero(2, n);
    for (u, v) in v0_pairs {
        let ub = ExteriorElement::from_vector(&abelianize(u).to_bigint());
        let vb = ExteriorElement::from_vector(&abelianize(v).to_bigint());
        lambda = lambda.add(&ub.wedge(&vb)?)?;
    }
    let mut w = lambda;
    for word in v_rest {
        w = w.wedge(&ExteriorElement::from_vector(&abelianize(word).to_bigint()))?;
    }
    Ok(w.top_det()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn pres(n: usize, relators: &[&str]) -> Presentation {
        Presentation::new(
            n,
            relators.iter().map(|r| parse_word(r, n).unwrap()).collect(),
        )
        .unwrap()
    }

    fn w(text: &str, n: usize) -> Word {
        parse_word(text, n).unwrap()
    }

    #[test]
    fn analyze_hopf() {
        let p = pres(2, &["[x1,x2]"]);
        let prof = analyze(&p);
        assert_eq!((prof.b1, prof.b2), (2, 1));
        assert_eq!(prof.torsion_order, BigInt::from(1));
    }

    #[test]
    fn analyze_cyclic_five() {
        let p = pres(1, &["x1^5"]);
        let prof = analyze(&p);
        assert_eq!((prof.b1, prof.b2), (0, 0));
        assert_eq!(prof.torsion_order, BigInt::from(5));
    }

    #[test]
    fn analyze_torsion_fixture() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let prof = analyze(&p);
        assert_eq!((prof.b1, prof.b2), (2, 1));
        assert_eq!(prof.torsion_order, BigInt::from(3));
    }

    #[test]
    fn sigma_of_hopf() {
        let p = pres(2, &["[x1,x2]"]);
        let sigma = sigma_generator(&analyze(&p)).unwrap();
        assert_eq!(sigma.coefficients, vec![BigInt::from(1)]);
    }

    #[test]
    fn sigma_of_torsion_fixture() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let sigma = sigma_generator(&analyze(&p)).unwrap();
        assert_eq!(sigma.coefficients, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn sigma_of_dependent_relators() {
        // boundary columns (2,0) and (4,0): kernel generated by (2,-1)
        let p = pres(2, &["x1^2", "x1^4"]);
        let sigma = sigma_generator(&analyze(&p)).unwrap();
        assert_eq!(sigma.coefficients, vec![BigInt::from(2), BigInt::from(-1)]);
    }

    #[test]
    fn mu_of_hopf_is_linking_form() {
        let p = pres(2, &["[x1,x2]"]);
        let prof = analyze(&p);
        let sigma = sigma_generator(&prof).unwrap();
        let mu = mu_form(&p, &prof, &sigma).unwrap();
        assert_eq!(mu.mu.coefficient(&[1, 2]).abs(), BigInt::from(1));
    }

    #[test]
    fn mu_of_surface_groups() {
        // genus ρ relator ∏ℓ [xℓ, x_{ℓ+ρ}] gives μ = Σℓ eℓ∧e_{ℓ+ρ} exactly
        for rho in 1usize..=3 {
            let n = 2 * rho;
            let relator = (1..=rho)
                .map(|l| format!("[x{},x{}]", l, l + rho))
                .collect::<String>();
            let p = pres(n, &[&relator]);
            let prof = analyze(&p);
            let sigma = sigma_generator(&prof).unwrap();
            let mu = mu_form(&p, &prof, &sigma).unwrap();
            let mut expected = ExteriorElement::zero(2, n);
            for l in 1..=rho {
                expected.add_term(&[l, l + rho], BigInt::from(1));
            }
            assert_eq!(mu.mu, expected, "genus {rho}");
        }
    }

    #[test]
    fn mu_of_torsion_fixture() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let prof = analyze(&p);
        let sigma = sigma_generator(&prof).unwrap();
        let mu = mu_form(&p, &prof, &sigma).unwrap();
        assert_eq!(mu.mu.rank(), 2);
        assert_eq!(mu.mu.coefficient(&[1, 2]).abs(), BigInt::from(1));
    }

    #[test]
    fn thm1_cyclic_with_free_generator() {
        let p = pres(2, &["x1^5"]);
        let check = check_thm1(&p, &[w("x2", 2)]);
        assert!(check.holds);
        assert_eq!(check.degree_base.unwrap().abs(), BigInt::from(5));
    }

    #[test]
    fn thm1_fails_on_positive_b2() {
        let p = pres(2, &["[x1,x2]"]);
        assert!(!check_thm1(&p, &[w("x1", 2)]).holds);
    }

    #[test]
    fn thm1_free_group_identity_determinant() {
        let p = pres(2, &[]);
        let check = check_thm1(&p, &[w("x1", 2), w("x2", 2)]);
        assert!(check.holds);
        assert_eq!(check.degree_base.unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn thm1_rejects_dependent_loops() {
        let p = pres(2, &[]);
        let check = check_thm1(&p, &[w("x1", 2), w("x1^2", 2)]);
        assert!(!check.holds);
    }

    #[test]
    fn thm1_rejects_torsion_loop() {
        // gamma must have infinite order in homology
        let p = pres(2, &["x1 x2 x1^-1 x2^-2"]);
        let check = check_thm1(&p, &[w("x1", 2)]);
        assert!(check.holds, "{}", check.reason);
        let dependent = check_thm1(&p, &[w("x2", 2)]);
        assert!(!dependent.holds);
    }

    #[test]
    fn thm2_hopf() {
        let p = pres(2, &["[x1,x2]"]);
        let check = check_thm2(&p, &[]);
        assert!(check.holds);
        assert_eq!(check.prediction.unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn thm2_genus_two_good_and_bad_gammas() {
        // μ = e1∧e2 + e3∧e4: wedging with x1,x2 leaves e3∧e4, with x1,x3 kills both terms
        let p = pres(4, &["[x1,x2][x3,x4]"]);
        let good = check_thm2(&p, &[w("x1", 4), w("x2", 4)]);
        assert!(good.holds);
        assert_eq!(good.prediction.unwrap().abs(), BigInt::from(1));
        let bad = check_thm2(&p, &[w("x1", 4), w("x3", 4)]);
        assert!(!bad.holds);
    }

    #[test]
    fn thm2_torsion_fixture_prediction() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let check = check_thm2(&p, &[]);
        assert!(check.holds);
        assert_eq!(check.prediction.unwrap().abs(), BigInt::from(3));
    }

    #[test]
    fn constraints_hopf() {
        let p = pres(2, &["[x1,x2]"]);
        let prof = analyze(&p);
        let sigma = sigma_generator(&prof).unwrap();
        let c = build_thm2_constraints(&p, &prof, &sigma, None).unwrap();
        assert_eq!(c.v_words, vec![w("[x1,x2]", 2)]);
        assert_eq!(c.epsilons, vec![-1]);
    }

    #[test]
    fn constraints_torsion_fixture_eta_variants() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let prof = analyze(&p);
        let sigma = sigma_generator(&prof).unwrap();
        let c = build_thm2_constraints(&p, &prof, &sigma, Some(&[1, 0])).unwrap();
        assert_eq!(c.epsilons, vec![-1, 1]);
        assert_eq!(c.v_words[0], w("[x1,x2]", 3));
        assert_eq!(c.v_words[1], w("x3^3", 3));

        let c2 = build_thm2_constraints(&p, &prof, &sigma, Some(&[1, 1])).unwrap();
        assert_eq!(c2.epsilons, vec![-1, -1]);
    }

    #[test]
    fn constraints_reject_bad_eta() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let prof = analyze(&p);
        let sigma = sigma_generator(&prof).unwrap();
        assert!(matches!(
            build_thm2_constraints(&p, &prof, &sigma, Some(&[0, 1])),
            Err(HomologyError::EtaPairsToZero)
        ));
    }

    #[test]
    fn kappa_basic_cases() {
        let v0 = vec![(w("x1", 3), w("x2", 3))];
        assert_eq!(
            kappa(&v0, &[w("x3", 3)], 3).unwrap().abs(),
            BigInt::from(1)
        );
        assert_eq!(kappa(&v0, &[w("x1", 3)], 3).unwrap(), BigInt::from(0));
        let v0_2 = vec![(w("x1", 2), w("x2", 2))];
        assert_eq!(kappa(&v0_2, &[], 2).unwrap(), BigInt::from(1));
    }

    #[test]
    fn kappa_matches_prediction_on_fixtures() {
        // det(λ∧v̄₁∧⋯) = ±|T|·det(μ∧γ̄₁∧⋯)
        let cases: Vec<(Presentation, Vec<Word>)> = vec![
            (pres(2, &["[x1,x2]"]), vec![]),
            (pres(3, &["[x1,x2]", "x3^3"]), vec![]),
            (
                pres(4, &["[x1,x3][x2,x4]"]),
                vec![w("x1", 4), w("x3", 4)],
            ),
            (pres(2, &["[x1,x2]^2"]), vec![]),
            (
                pres(4, &["[x1,x2][x3,x4]"]),
                vec![w("x1 x3", 4), w("x2", 4)],
            ),
        ];
        for (p, gammas) in cases {
            let n = p.generator_count();
            let prof = analyze(&p);
            let sigma = sigma_generator(&prof).unwrap();
            let check = check_thm2(&p, &gammas);
            let constraints = build_thm2_constraints(&p, &prof, &sigma, None).unwrap();
            let mut rest: Vec<Word> = constraints.v_words[1..].to_vec();
            rest.extend(gammas.iter().cloned());
            let k = kappa(&constraints.commutator_pairs, &rest, n).unwrap();
            assert_eq!(
                k.abs(),
                check.prediction.unwrap().abs(),
                "kappa mismatch for presentation with {} relators",
                p.relators().len()
            );
        }
    }

    #[test]
    fn unimodular_machinery_roundtrip() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1, 1], &[3, 2, 1], &[1, 1, 1]]);
        assert_eq!(m.determinant().unwrap().abs(), BigInt::from(1));
        let inv = unimodular_inverse(&m);
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(3));
        let (images, inverse) = realize_unimodular_with_inverse(&m);
        verify_automorphism(&images, &inverse, &m);
    }
}
