//! Witness construction: random-restart Gauss–Newton solving of word
//! equations over `(S³)ⁿ`, pipelines for both existence theorems, and the
//! w₂ / non-torus verifications on solutions.

mod gauss_newton;

pub use gauss_newton::Constraint;

use crate::homology::{
    analyze, build_thm2_constraints, check_thm1, check_thm2, sigma_generator, HomologyError,
    Presentation, Thm2Check,
};
use crate::liegrp::{
    covering_map, so3_word_eval, word_eval, LieError, QTuple, Quat, Rot3, Tolerances,
};
use crate::words::{abelianize, Word, WordError};
use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),
    #[error("restart budget exhausted; best max residual {best_residual:.3e} (not a disproof)")]
    BudgetExhausted { best_residual: f64 },
    #[error("cycle is not a mod-2 cycle of the boundary map")]
    NotACycle,
    #[error("images do not satisfy relator {index} (distance {distance:.3e})")]
    NotARepresentation { index: usize, distance: f64 },
    #[error("lifted relator value not within tolerance of ±1 (distance {distance:.3e})")]
    NotNearSign { distance: f64 },
    #[error("targets count {got} does not match loops count {expected}")]
    TargetCount { expected: usize, got: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Origin tag for a constraint system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemOrigin {
    Thm1,
    Thm2,
    Raw,
}

/// Words and unit-quaternion targets over `F_n`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub origin: SystemOrigin,
}

impl ConstraintSystem {
    pub fn new(
        n: usize,
        pairs: Vec<(Word, Quat)>,
        origin: SystemOrigin,
    ) -> Result<Self, SolveError> {
        for (w, t) in &pairs {
            if w.rank() != n {
                return Err(WordError::RankMismatch {
                    left: n,
                    right: w.rank(),
                }
                .into());
            }
            let norm = t.norm();
            if (norm - 1.0).abs() > 1e-6 {
                return Err(LieError::NotUnit { norm }.into());
            }
        }
        Ok(ConstraintSystem {
            n,
            constraints: pairs
                .into_iter()
                .map(|(word, target)| Constraint {
                    word,
                    target: target.normalize(),
                })
                .collect(),
            origin,
        })
    }
}

/// A solved representation with its verification data.
#[derive(Debug, Clone)]
pub struct Witness {
    pub rep: QTuple,
    pub residuals: Vec<f64>,
    pub restarts_used: usize,
    pub seed: u64,
}

impl Witness {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Lift signs per relator and the w₂ pairing on a queried cycle.
#[derive(Debug, Clone)]
pub struct W2Report {
    /// `δ(ψ(wᵢ))` per relator: 1 when the lifted relator evaluates to −1.
    pub lift_signs: Vec<u8>,
    /// `⟨ω₂(φ), σ⟩`.
    pub pairing_sigma: u8,
    /// Whether some pair of generator images fails to commute.
    pub nonabelian: bool,
    /// Non-torus certificate: non-commuting images, or the Klein-four
    /// configuration of π-rotations about orthogonal axes (which commutes
    /// yet lies in no maximal torus).
    pub non_toral: bool,
}

/// Solver configuration: restart and iteration budget plus tolerances.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub tolerances: Tolerances,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 200,
            iterations: 100,
            tolerances: Tolerances::default(),
        }
    }
}

/// Multi-start Gauss–Newton solve of the system. Deterministic for a fixed
/// seed; every success is re-verified by recomputing residuals from scratch.
pub fn solve(sys: &ConstraintSystem, config: &SolverConfig, seed: u64) -> Result<Witness, SolveError> {
    let tol = &config.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for restart in 0..config.restarts.max(1) {
        let start = gauss_newton::random_start(&mut rng, sys.n);
        let g = gauss_newton::descend(&sys.constraints, start, config.iterations, tol);
        // polish once more, then re-verify independently
        let g = gauss_newton::descend(&sys.constraints, g, 2, tol);
        let residuals = gauss_newton::residuals(&sys.constraints, &g);
        let max = residuals.iter().cloned().fold(0.0, f64::max);
        if max < tol.success {
            return Ok(Witness {
                rep: g,
                residuals,
                restarts_used: restart + 1,
                seed,
            });
        }
        best = best.min(max);
    }
    Err(SolveError::BudgetExhausted {
        best_residual: best,
    })
}

/// A prescribed value for a loop: either an exact Sp(1) element or an
/// SO(3) rotation, solved through the double cover trying both lifts.
#[derive(Debug, Clone)]
pub enum TargetValue {
    Sp1(Quat),
    So3(Rot3),
}

/// Pipeline for the `b₂ = 0` theorem: relators to 1, loops to the
/// prescribed targets.
pub fn solve_thm1(
    p: &Presentation,
    gammas: &[Word],
    targets: &[TargetValue],
    config: &SolverConfig,
    seed: u64,
) -> Result<Witness, SolveError> {
    let check = check_thm1(p, gammas);
    if !check.holds {
        return Err(SolveError::HypothesisFailed(check.reason));
    }
    if targets.len() != gammas.len() {
        return Err(SolveError::TargetCount {
            expected: gammas.len(),
            got: targets.len(),
        });
    }
    let n = p.generator_count();
    let so3_indices: Vec<usize> = targets
        .iter()
        .enumerate()
        .filter_map(|(i, t)| matches!(t, TargetValue::So3(_)).then_some(i))
        .collect();
    let combos = 1usize << so3_indices.len().min(6);
    let per_combo = (config.restarts / combos).max(1);
    let mut last_err = None;
    for combo in 0..combos {
        let mut pairs: Vec<(Word, Quat)> = p
            .relators()
            .iter()
            .map(|r| (r.clone(), Quat::one()))
            .collect();
        for (i, (g, t)) in gammas.iter().zip(targets).enumerate() {
            let target = match t {
                TargetValue::Sp1(q) => *q,
                TargetValue::So3(r) => {
                    let lift = crate::liegrp::lift_rotation(r);
                    let bit = so3_indices.iter().position(|&x| x == i).unwrap();
                    if combo >> bit & 1 == 1 {
                        -lift
                    } else {
                        lift
                    }
                }
            };
            pairs.push((g.clone(), target));
        }
        let sys = ConstraintSystem::new(n, pairs, SystemOrigin::Thm1)?;
        let combo_config = SolverConfig {
            restarts: per_combo,
            ..*config
        };
        match solve(&sys, &combo_config, seed.wrapping_add(combo as u64)) {
            Ok(w) => return Ok(w),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one combo attempted"))
}

/// Pipeline for the `b₂ = 1` theorem: solve the rewritten-relator system
/// `ψ(w_j′) = ε_j`, `ψ(γᵢ) = 1`, then verify w₂ and non-commutativity on
/// the induced SO(3) representation.
pub fn solve_thm2(
    p: &Presentation,
    gammas: &[Word],
    eta: Option<&[u8]>,
    config: &SolverConfig,
    seed: u64,
) -> Result<(Witness, W2Report, Thm2Check), SolveError> {
    let check = check_thm2(p, gammas);
    if !check.holds {
        return Err(SolveError::HypothesisFailed(check.reason.clone()));
    }
    let profile = analyze(p);
    let sigma = sigma_generator(&profile)?;
    let constraints = build_thm2_constraints(p, &profile, &sigma, eta)?;
    let n = p.generator_count();
    let mut pairs: Vec<(Word, Quat)> = constraints
        .v_words
        .iter()
        .zip(&constraints.epsilons)
        .map(|(w, &e)| {
            (
                w.clone(),
                if e < 0 { Quat::minus_one() } else { Quat::one() },
            )
        })
        .collect();
    let used_gammas = &gammas[..profile.b1 - 2];
    for g in used_gammas {
        pairs.push((g.clone(), Quat::one()));
    }
    let sys = ConstraintSystem::new(n, pairs, SystemOrigin::Thm2)?;
    let witness = solve(&sys, config, seed)?;

    let lifts: Vec<Quat> = witness.rep.0.clone();
    let rot_images: Vec<Rot3> = lifts
        .iter()
        .map(|q| covering_map(q).expect("unit"))
        .collect();
    let tol = &config.tolerances;
    let lift_signs = relator_lift_signs(p, &lifts, tol)?;
    let sigma_cycle: Vec<u8> = sigma
        .coefficients
        .iter()
        .map(|c| {
            use num_integer::Integer;
            use num_traits::One;
            (c.mod_floor(&num_bigint::BigInt::from(2)).is_one()) as u8
        })
        .collect();
    let pairing_sigma = pairing_from_signs(&lift_signs, &sigma_cycle);
    let nonabelian = nonabelian_check(&rot_images, tol);
    let non_toral =
        nonabelian || pi_rotation_axis_diagnostic(&rot_images, tol) == Some(true);
    let report = W2Report {
        lift_signs,
        pairing_sigma,
        nonabelian,
        non_toral,
    };
    Ok((witness, report, check))
}

fn relator_lift_signs(
    p: &Presentation,
    lifts: &[Quat],
    tol: &Tolerances,
) -> Result<Vec<u8>, SolveError> {
    let tuple = QTuple(lifts.to_vec());
    p.relators()
        .iter()
        .map(|r| {
            let v = word_eval(r, &tuple)?;
            let d_plus = v.dist(&Quat::one());
            let d_minus = v.dist(&Quat::minus_one());
            if d_plus.min(d_minus) > tol.snap {
                return Err(SolveError::NotNearSign {
                    distance: d_plus.min(d_minus),
                });
            }
            Ok((d_minus < d_plus) as u8)
        })
        .collect()
}

fn pairing_from_signs(signs: &[u8], cycle: &[u8]) -> u8 {
    signs
        .iter()
        .zip(cycle)
        .map(|(&s, &c)| (s & 1) as u32 * (c & 1) as u32)
        .sum::<u32>() as u8
        % 2
}

/// Evaluates `⟨ω₂(φ), [c]⟩` for an SO(3) representation given by generator
/// images and a mod-2 cycle over relators: lift the images to Sp(1),
/// evaluate each relator to ±1, and sum the lift signs over the cycle.
/// Independent of the lift choices because `c` is a cycle.
pub fn w2_evaluate(
    p: &Presentation,
    rep: &[Rot3],
    cycle: &[u8],
    tol: &Tolerances,
) -> Result<u8, SolveError> {
    w2_evaluate_with_lift_signs(p, rep, cycle, &vec![false; rep.len()], tol)
}

/// Like [`w2_evaluate`], with an explicit per-generator lift flip; used to
/// assert independence of the lift choices.
pub fn w2_evaluate_with_lift_signs(
    p: &Presentation,
    rep: &[Rot3],
    cycle: &[u8],
    flip: &[bool],
    tol: &Tolerances,
) -> Result<u8, SolveError> {
    if cycle.len() != p.relators().len() {
        return Err(SolveError::NotACycle);
    }
    // ∂₂c ≡ 0 (mod 2)
    let n = p.generator_count();
    let mut boundary = vec![0i64; n];
    for (r, &c) in p.relators().iter().zip(cycle) {
        if c % 2 == 1 {
            for (slot, v) in boundary.iter_mut().zip(abelianize(r).0) {
                *slot += v;
            }
        }
    }
    if boundary.iter().any(|v| v % 2 != 0) {
        return Err(SolveError::NotACycle);
    }
    // rep must satisfy the relators in SO(3)
    for (index, r) in p.relators().iter().enumerate() {
        let value = so3_word_eval(r, rep)?;
        let distance = (value - Matrix3::identity()).norm();
        if distance > tol.snap {
            return Err(SolveError::NotARepresentation { index, distance });
        }
    }
    let lifts: Vec<Quat> = rep
        .iter()
        .zip(flip)
        .map(|(m, &f)| {
            let q = crate::liegrp::lift_rotation(m);
            if f {
                -q
            } else {
                q
            }
        })
        .collect();
    let signs = relator_lift_signs(p, &lifts, tol)?;
    Ok(pairing_from_signs(&signs, cycle))
}

/// True iff some pair of generator images fails to commute. For SO(3) an
/// image inside a maximal torus is abelian, so `true` certifies the
/// non-torus conclusion; see the axis diagnostic for the degenerate case.
pub fn nonabelian_check(rep: &[Rot3], tol: &Tolerances) -> bool {
    for (a, ra) in rep.iter().enumerate() {
        for rb in rep.iter().skip(a + 1) {
            let comm = ra * rb * ra.transpose() * rb.transpose();
            if (comm - Matrix3::identity()).norm() > tol.snap {
                return true;
            }
        }
    }
    false
}

/// When every image is a π-rotation, reports whether some pair of rotation
/// axes is orthogonal — the Klein-four configuration that commutes without
/// lying in a torus. `None` when the diagnostic does not apply.
pub fn pi_rotation_axis_diagnostic(rep: &[Rot3], tol: &Tolerances) -> Option<bool> {
    let mut axes = vec![];
    for m in rep {
        let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
        // identity images generate nothing; skip them
        if (tr - 3.0).abs() < 1e-3 {
            continue;
        }
        // a π-rotation has trace −1
        if (tr + 1.0).abs() > 1e-3 {
            return None;
        }
        let q = crate::liegrp::lift_rotation(m);
        let im = q.imag();
        let norm = (im[0] * im[0] + im[1] * im[1] + im[2] * im[2]).sqrt();
        axes.push([im[0] / norm, im[1] / norm, im[2] / norm]);
    }
    for (a, ax) in axes.iter().enumerate() {
        for bx in axes.iter().skip(a + 1) {
            let dot = ax[0] * bx[0] + ax[1] * bx[1] + ax[2] * bx[2];
            if dot.abs() < tol.snap {
                return Some(true);
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(text: &str, n: usize) -> Word {
        parse_word(text, n).unwrap()
    }

    fn pres(n: usize, relators: &[&str]) -> Presentation {
        Presentation::new(
            n,
            relators.iter().map(|r| parse_word(r, n).unwrap()).collect(),
        )
        .unwrap()
    }

    fn config() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn solve_commutator_minus_one() {
        let sys = ConstraintSystem::new(
            2,
            vec![(w("[x1,x2]", 2), Quat::minus_one())],
            SystemOrigin::Raw,
        )
        .unwrap();
        let witness = solve(&sys, &config(), 0).unwrap();
        assert!(witness.max_residual() < 1e-9);
        // Lemma: anticommuting solutions are pure imaginary with orthogonal parts
        let (g, h) = (witness.rep.0[0], witness.rep.0[1]);
        assert!(g.r.abs() < 1e-6 && h.r.abs() < 1e-6);
        let dot = g.i * h.i + g.j * h.j + g.k * h.k;
        assert!(dot.abs() < 1e-6);
    }

    #[test]
    fn solve_free_assignment() {
        let t1 = Quat::new(0.1, 0.5, -0.7, 0.2).normalize();
        let t2 = Quat::new(-0.3, 0.1, 0.4, 0.8).normalize();
        let sys = ConstraintSystem::new(
            2,
            vec![(w("x1", 2), t1), (w("x2", 2), t2)],
            SystemOrigin::Raw,
        )
        .unwrap();
        let witness = solve(&sys, &config(), 3).unwrap();
        assert!(witness.max_residual() < 1e-9);
    }

    #[test]
    fn solve_genus_two_commutator_product() {
        let sys = ConstraintSystem::new(
            4,
            vec![(w("[x1,x3][x2,x4]", 4), Quat::minus_one())],
            SystemOrigin::Raw,
        )
        .unwrap();
        let witness = solve(&sys, &config(), 0).unwrap();
        assert!(witness.max_residual() < 1e-9);
    }

    #[test]
    fn solve_is_deterministic() {
        let sys = ConstraintSystem::new(
            2,
            vec![(w("[x1,x2]", 2), Quat::minus_one())],
            SystemOrigin::Raw,
        )
        .unwrap();
        let a = solve(&sys, &config(), 42).unwrap();
        let b = solve(&sys, &config(), 42).unwrap();
        assert_eq!(a.rep, b.rep);
        assert_eq!(a.restarts_used, b.restarts_used);
    }

    #[test]
    fn thm1_cyclic_fixture() {
        let p = pres(2, &["x1^5"]);
        let t = TargetValue::Sp1(Quat::new(0.3, -0.2, 0.8, 0.1).normalize());
        let witness = solve_thm1(&p, &[w("x2", 2)], &[t], &config(), 0).unwrap();
        assert!(witness.max_residual() < 1e-9);
        // the relator constraint means the first image has order dividing 5
        let fifth = word_eval(&w("x1^5", 2), &witness.rep).unwrap();
        assert!(fifth.dist(&Quat::one()) < 1e-8);
    }

    #[test]
    fn thm1_rejects_bad_hypothesis() {
        let p = pres(2, &["[x1,x2]"]);
        let t = TargetValue::Sp1(Quat::one());
        assert!(matches!(
            solve_thm1(&p, &[w("x1", 2)], &[t], &config(), 0),
            Err(SolveError::HypothesisFailed(_))
        ));
    }

    #[test]
    fn thm1_so3_target_via_lifts() {
        let p = pres(2, &[]);
        let rot = covering_map(&Quat::new(0.4, 0.6, -0.2, 0.67).normalize()).unwrap();
        let witness = solve_thm1(
            &p,
            &[w("x1", 2)],
            &[TargetValue::So3(rot)],
            &config(),
            0,
        )
        .unwrap();
        let img = covering_map(&witness.rep.0[0]).unwrap();
        assert!((img - rot).norm() < 1e-8);
    }

    #[test]
    fn thm2_hopf_full_pipeline() {
        let p = pres(2, &["[x1,x2]"]);
        let (witness, report, check) = solve_thm2(&p, &[], None, &config(), 0).unwrap();
        assert!(witness.max_residual() < 1e-9);
        assert!(check.holds);
        assert_eq!(report.pairing_sigma, 1);
        // the only solutions are Klein-four pairs: commuting π-rotations
        // about orthogonal axes, still outside every maximal torus
        assert!(!report.nonabelian);
        assert!(report.non_toral);
    }

    #[test]
    fn thm2_torsion_fixture() {
        let p = pres(3, &["[x1,x2]", "x3^3"]);
        let (witness, report, _) = solve_thm2(&p, &[], None, &config(), 0).unwrap();
        assert!(witness.max_residual() < 1e-9);
        assert_eq!(report.pairing_sigma, 1);
        // epsilon branch +1: the third image cubes to 1
        let cube = word_eval(&w("x3^3", 3), &witness.rep).unwrap();
        assert!(cube.dist(&Quat::one()) < 1e-8);
    }

    #[test]
    fn w2_of_standard_klein_pair() {
        let p = pres(2, &["[x1,x2]"]);
        let rep = vec![
            covering_map(&Quat::unit_i()).unwrap(),
            covering_map(&Quat::unit_j()).unwrap(),
        ];
        let tol = Tolerances::default();
        assert_eq!(w2_evaluate(&p, &rep, &[1], &tol).unwrap(), 1);
    }

    #[test]
    fn w2_of_abelian_image_vanishes() {
        let p = pres(2, &["[x1,x2]"]);
        let theta = 0.73f64;
        let rep = vec![
            covering_map(&Quat::unit_i()).unwrap(),
            covering_map(&Quat::new(theta.cos(), theta.sin(), 0.0, 0.0)).unwrap(),
        ];
        let tol = Tolerances::default();
        assert_eq!(w2_evaluate(&p, &rep, &[1], &tol).unwrap(), 0);
        assert!(!nonabelian_check(&rep, &tol));
    }

    #[test]
    fn w2_zero_cycle() {
        let p = pres(2, &["[x1,x2]"]);
        let rep = vec![
            covering_map(&Quat::unit_i()).unwrap(),
            covering_map(&Quat::unit_j()).unwrap(),
        ];
        let tol = Tolerances::default();
        assert_eq!(w2_evaluate(&p, &rep, &[0], &tol).unwrap(), 0);
    }

    #[test]
    fn w2_rejects_non_cycle() {
        let p = pres(1, &["x1^3"]);
        let rep = vec![covering_map(&Quat::one()).unwrap()];
        let tol = Tolerances::default();
        assert!(matches!(
            w2_evaluate(&p, &rep, &[1], &tol),
            Err(SolveError::NotACycle)
        ));
    }

    #[test]
    fn w2_independent_of_lifts() {
        let p = pres(2, &["[x1,x2]"]);
        let rep = vec![
            covering_map(&Quat::unit_i()).unwrap(),
            covering_map(&Quat::unit_j()).unwrap(),
        ];
        let tol = Tolerances::default();
        for flips in [[false, false], [true, false], [false, true], [true, true]] {
            assert_eq!(
                w2_evaluate_with_lift_signs(&p, &rep, &[1], &flips, &tol).unwrap(),
                1
            );
        }
    }

    #[test]
    fn nonabelian_check_cases() {
        let tol = Tolerances::default();
        let a = covering_map(&Quat::unit_i()).unwrap();
        let b = covering_map(&Quat::unit_j()).unwrap();
        // π-rotations about orthogonal axes commute (Klein four)
        assert!(!nonabelian_check(&[a, b], &tol));
        let theta: f64 = 0.4;
        let c = covering_map(&Quat::new(theta.cos(), theta.sin(), 0.0, 0.0)).unwrap();
        assert!(!nonabelian_check(&[a, c], &tol));
        let d = covering_map(&Quat::new(theta.cos(), 0.0, theta.sin(), 0.0)).unwrap();
        assert!(nonabelian_check(&[a, d], &tol));
        // Klein-four diagnostic: pi-rotations about orthogonal axes
        assert_eq!(pi_rotation_axis_diagnostic(&[a, b], &tol), Some(true));
        assert_eq!(pi_rotation_axis_diagnostic(&[a, c], &tol), None);
    }
}
