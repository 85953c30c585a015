use super::quat::{QTuple, Quat, Rot3, TangentVector};
use super::LieError;
use crate::words::Word;
use nalgebra::Matrix3;

fn check_rank(w: &Word, g: &QTuple) -> Result<(), LieError> {
    if w.rank() != g.len() {
        return Err(LieError::RankMismatch {
            word_rank: w.rank(),
            tuple_len: g.len(),
        });
    }
    Ok(())
}

/// Evaluates the word map `w_G` at `g ∈ Gⁿ`.
pub fn word_eval(w: &Word, g: &QTuple) -> Result<Quat, LieError> {
    check_rank(w, g)?;
    let mut out = Quat::one();
    let mut since_norm = 0;
    for l in w.letters() {
        let q = g.0[l.index - 1];
        out = out * if l.sign > 0 { q } else { q.inverse() };
        since_norm += 1;
        if since_norm == 64 {
            out = out.normalize();
            since_norm = 0;
        }
    }
    Ok(out.normalize())
}

/// SO(3) word evaluation, used to check that the covering map intertwines
/// word maps.
pub fn so3_word_eval(w: &Word, g: &[Rot3]) -> Result<Rot3, LieError> {
    if w.rank() != g.len() {
        return Err(LieError::RankMismatch {
            word_rank: w.rank(),
            tuple_len: g.len(),
        });
    }
    let mut out = Matrix3::identity();
    for l in w.letters() {
        let m = g[l.index - 1];
        out *= if l.sign > 0 { m } else { m.transpose() };
    }
    Ok(out)
}

/// Right-trivialized differential of the word map:
/// `d/dt|₀ [w(exp(tξ)·g) · w(g)⁻¹]`, a pure-imaginary quaternion.
///
/// For `w = a₁⋯a_L` the derivative is the prefix-adjoint sum
/// `Σ_p Ad(a₁⋯a_{p−1})(da_p·a_p⁻¹)` with `da·a⁻¹ = ξᵢ` for a positive
/// letter and `−Ad(gᵢ⁻¹)ξᵢ` for a negative one.
pub fn word_differential(
    w: &Word,
    g: &QTuple,
    xi: &TangentVector,
) -> Result<Quat, LieError> {
    check_rank(w, g)?;
    if xi.0.len() != g.len() {
        return Err(LieError::RankMismatch {
            word_rank: xi.0.len(),
            tuple_len: g.len(),
        });
    }
    let mut prefix = Quat::one();
    let mut acc = Quat::new(0.0, 0.0, 0.0, 0.0);
    for l in w.letters() {
        let q = g.0[l.index - 1];
        let v = Quat::pure(xi.0[l.index - 1]);
        let term = if l.sign > 0 {
            prefix.ad(v)
        } else {
            -(prefix * q.inverse()).ad(v)
        };
        acc = acc + term;
        prefix = (prefix * if l.sign > 0 { q } else { q.inverse() }).normalize();
    }
    // discard rounding noise in the real part
    acc.r = 0.0;
    Ok(acc)
}
