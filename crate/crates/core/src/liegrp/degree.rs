use super::quat::{random_unit_quat, QTuple, Quat, TangentVector};
use super::word_map::{word_differential, word_eval};
use super::{LieError, Tolerances};
use crate::words::{abelianize, Word};
use crate::zlinalg::IntMatrix;
use nalgebra::{Matrix3, Vector3};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The Gerstenhaber–Rothaus degree of the map `Gⁿ → Gⁿ` defined by `n`
/// words, for a compact connected group of rank `m`:
/// `deg = det(w̄₁,…,w̄ₙ)^m`, in exact integer arithmetic.
pub fn degree_formula(words: &[Word], rank_m: u32) -> Result<BigInt, LieError> {
    let n = words
        .first()
        .map(|w| w.rank())
        .unwrap_or(0);
    if words.len() != n {
        return Err(LieError::ArityMismatch {
            expected: n,
            got: words.len(),
        });
    }
    let m = IntMatrix::from_columns(
        n,
        words.iter().map(|w| abelianize(w).to_bigint()).collect(),
    );
    let det = m.determinant().expect("square");
    Ok(det.pow(rank_m))
}

/// Outcome of the empirical signed preimage count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeOutcome {
    /// Signed count of preimages found.
    Count(i64),
    /// No Newton run converged within the budget; not a count of zero.
    Inconclusive,
    /// The target is near-singular for this word; resample it.
    NearSingularTarget,
}

/// Empirical signed preimage count for a word map `S³ → S³` at `n = 1`:
/// multi-start Newton for `w(g) = target`, solutions deduplicated and
/// counted with the sign of the right-trivialized Jacobian.
pub fn empirical_degree(
    w: &Word,
    target: &Quat,
    starts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DegreeOutcome, LieError> {
    if w.rank() != 1 {
        return Err(LieError::RankMismatch {
            word_rank: w.rank(),
            tuple_len: 1,
        });
    }
    if abelianize(w).is_zero() {
        return Err(LieError::TrivialWord);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solutions: Vec<(Quat, i64)> = vec![];
    let mut converged_any = false;
    for _ in 0..starts {
        let mut g = random_unit_quat(&mut rng);
        let mut ok = false;
        for _ in 0..60 {
            let val = word_eval(w, &QTuple(vec![g]))?;
            let err = val * target.inverse();
            let r = Vector3::from(err.log());
            if r.norm() < tol.newton {
                ok = true;
                break;
            }
            let jac = jacobian(w, g)?;
            let Some(step) = jac.lu().solve(&(-r)) else {
                break;
            };
            // damp long steps far from the solution
            let step = if step.norm() > 1.0 {
                step / step.norm()
            } else {
                step
            };
            g = (Quat::exp_pure([step[0], step[1], step[2]]) * g).normalize();
        }
        if !ok {
            continue;
        }
        converged_any = true;
        let jac = jacobian(w, g)?;
        let sv = jac.svd(false, false).singular_values;
        if sv[2].abs() < tol.singular {
            return Ok(DegreeOutcome::NearSingularTarget);
        }
        let sign = if jac.determinant() > 0.0 { 1 } else { -1 };
        if !solutions.iter().any(|(s, _)| s.dist(&g) < tol.dedup) {
            solutions.push((g, sign));
        }
    }
    if !converged_any {
        return Ok(DegreeOutcome::Inconclusive);
    }
    // deterministic order regardless of discovery order
    solutions.sort_by(|(a, _), (b, _)| {
        [a.r, a.i, a.j, a.k]
            .partial_cmp(&[b.r, b.i, b.j, b.k])
            .unwrap()
    });
    Ok(DegreeOutcome::Count(solutions.iter().map(|(_, s)| s).sum()))
}

/// 3×3 right-trivialized Jacobian of the word map at `g ∈ S³`.
fn jacobian(w: &Word, g: Quat) -> Result<Matrix3<f64>, LieError> {
    let tuple = QTuple(vec![g]);
    let mut m = Matrix3::zeros();
    for axis in 0..3 {
        let xi = TangentVector::basis(1, 0, axis);
        let d = word_differential(w, &tuple, &xi)?;
        let v = d.imag();
        for row in 0..3 {
            m[(row, axis)] = v[row];
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(text: &str, n: usize) -> Word {
        parse_word(text, n).unwrap()
    }

    #[test]
    fn formula_identity_words() {
        let words: Vec<Word> = (1..=3).map(|i| w(&format!("x{i}"), 3)).collect();
        assert_eq!(degree_formula(&words, 5).unwrap(), BigInt::from(1));
    }

    #[test]
    fn formula_power_word() {
        assert_eq!(degree_formula(&[w("x1^4", 1)], 1).unwrap(), BigInt::from(4));
    }

    #[test]
    fn formula_unipotent() {
        let words = vec![w("x1 x2", 2), w("x2", 2)];
        assert_eq!(degree_formula(&words, 1).unwrap(), BigInt::from(1));
        assert_eq!(degree_formula(&words, 2).unwrap(), BigInt::from(1));
    }

    #[test]
    fn formula_arity_mismatch() {
        assert!(degree_formula(&[w("x1", 2)], 1).is_err());
    }

    #[test]
    fn empirical_identity_word() {
        let tol = Tolerances::default();
        let target = Quat::new(0.3, 0.5, -0.2, 0.78).normalize();
        let out = empirical_degree(&w("x1", 1), &target, 50, 0, &tol).unwrap();
        assert_eq!(out, DegreeOutcome::Count(1));
    }

    #[test]
    fn empirical_square_word() {
        // the two square roots of a generic target are both positively oriented
        let tol = Tolerances::default();
        let target = Quat::new(0.2, 0.9, 0.1, -0.3).normalize();
        let out = empirical_degree(&w("x1^2", 1), &target, 400, 1, &tol).unwrap();
        assert_eq!(out, DegreeOutcome::Count(2));
    }

    #[test]
    fn empirical_cube_word() {
        let tol = Tolerances::default();
        let target = Quat::new(-0.1, 0.4, 0.6, 0.2).normalize();
        let out = empirical_degree(&w("x1^3", 1), &target, 800, 2, &tol).unwrap();
        assert_eq!(out, DegreeOutcome::Count(3));
    }

    #[test]
    fn empirical_rejects_trivial_word() {
        let tol = Tolerances::default();
        assert!(matches!(
            empirical_degree(&w("[x1,x1]", 1), &Quat::one(), 10, 0, &tol),
            Err(LieError::TrivialWord)
        ));
    }
}
