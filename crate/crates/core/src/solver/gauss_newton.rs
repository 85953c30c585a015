use crate::liegrp::{
    random_unit_quat, word_differential, word_eval, QTuple, Quat, TangentVector, Tolerances,
};
use crate::words::Word;
use nalgebra::{DMatrix, DVector, Vector3};
use rand_chacha::ChaCha8Rng;

/// One constraint `ψ(word) = target`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub word: Word,
    pub target: Quat,
}

/// Squared-residual objective `Σᵢ |log(ψ(vᵢ)·tᵢ⁻¹)|²`.
fn objective(constraints: &[Constraint], g: &QTuple) -> f64 {
    constraints
        .iter()
        .map(|c| {
            let e = word_eval(&c.word, g).expect("ranks checked") * c.target.inverse();
            let v = Vector3::from(e.log());
            v.norm_squared()
        })
        .sum()
}

/// Per-constraint distances `|ψ(vᵢ) − tᵢ|`, recomputed from scratch.
pub fn residuals(constraints: &[Constraint], g: &QTuple) -> Vec<f64> {
    constraints
        .iter()
        .map(|c| word_eval(&c.word, g).expect("ranks checked").dist(&c.target))
        .collect()
}

fn residual_vector(constraints: &[Constraint], g: &QTuple) -> DVector<f64> {
    let mut r = DVector::zeros(3 * constraints.len());
    for (idx, c) in constraints.iter().enumerate() {
        let e = word_eval(&c.word, g).expect("ranks checked") * c.target.inverse();
        let v = e.log();
        for a in 0..3 {
            r[3 * idx + a] = v[a];
        }
    }
    r
}

fn jacobian(constraints: &[Constraint], g: &QTuple) -> DMatrix<f64> {
    let n = g.len();
    let mut jac = DMatrix::zeros(3 * constraints.len(), 3 * n);
    for (idx, c) in constraints.iter().enumerate() {
        for factor in 0..n {
            for axis in 0..3 {
                let xi = TangentVector::basis(n, factor, axis);
                let d = word_differential(&c.word, g, &xi).expect("ranks checked");
                let v = d.imag();
                for a in 0..3 {
                    jac[(3 * idx + a, 3 * factor + axis)] = v[a];
                }
            }
        }
    }
    jac
}

/// One Levenberg-damped Gauss–Newton descent from the starting point.
/// Returns the final point; the caller decides whether it is a success.
pub fn descend(
    constraints: &[Constraint],
    start: QTuple,
    max_iters: usize,
    tol: &Tolerances,
) -> QTuple {
    let n = start.len();
    let mut g = start;
    let mut lambda = 1e-8f64;
    for _ in 0..max_iters {
        let r = residual_vector(constraints, &g);
        if r.norm() < tol.newton {
            break;
        }
        let jac = jacobian(constraints, &g);
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let jtr = &jt * &r;
        let mut improved = false;
        let f0 = objective(constraints, &g);
        for _ in 0..12 {
            let mut damped = jtj.clone();
            for d in 0..damped.nrows() {
                damped[(d, d)] += lambda;
            }
            let Some(step) = damped.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            // Armijo backtracking on the objective
            let mut t = 1.0f64;
            let mut accepted = None;
            for _ in 0..8 {
                let candidate = apply_step(&g, &step, t, n);
                if objective(constraints, &candidate) < f0 {
                    accepted = Some(candidate);
                    break;
                }
                t *= 0.5;
            }
            if let Some(candidate) = accepted {
                g = candidate;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    g
}

fn apply_step(g: &QTuple, step: &DVector<f64>, t: f64, n: usize) -> QTuple {
    QTuple(
        (0..n)
            .map(|f| {
                let xi = [
                    t * step[3 * f],
                    t * step[3 * f + 1],
                    t * step[3 * f + 2],
                ];
                (Quat::exp_pure(xi) * g.0[f]).normalize()
            })
            .collect(),
    )
}

pub fn random_start(rng: &mut ChaCha8Rng, n: usize) -> QTuple {
    QTuple((0..n).map(|_| random_unit_quat(rng)).collect())
}
