//! Structured reports emitted by the CLI, in human-readable and
//! machine-readable (JSON) forms. The JSON form is deterministic for a
//! fixed input and seed; wall-clock timing is reported only in the
//! human-readable rendering.

use crate::homology::HomologyProfile;
use crate::liegrp::Quat;
use crate::solver::{W2Report, Witness};
use crate::zlinalg::ExteriorElement;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProfileReport {
    pub b1: usize,
    pub b2: usize,
    pub torsion_order: String,
}

impl ProfileReport {
    pub fn from_profile(p: &HomologyProfile) -> Self {
        ProfileReport {
            b1: p.b1,
            b2: p.b2,
            torsion_order: p.torsion_order.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MuReport {
    /// Terms `(p, q, coefficient)` of `μ = Σ c_{pq}·e_p∧e_q`.
    pub terms: Vec<(usize, usize, String)>,
    pub display: String,
}

impl MuReport {
    pub fn from_element(mu: &ExteriorElement) -> Self {
        let terms: Vec<(usize, usize, String)> = mu
            .terms()
            .map(|(k, c)| (k[0], k[1], c.to_string()))
            .collect();
        MuReport {
            display: render_mu(mu),
            terms,
        }
    }
}

/// Prints `μ` as `x1∧x2 - 2·x1∧x3`, or `0`.
pub fn render_mu(mu: &ExteriorElement) -> String {
    let mut out = String::new();
    for (key, c) in mu.terms() {
        let mag = c.magnitude();
        let sign = c.sign() == num_bigint::Sign::Minus;
        if out.is_empty() {
            if sign {
                out.push('-');
            }
        } else {
            out.push_str(if sign { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag}·"));
        }
        out.push_str(&format!("x{}∧x{}", key[0], key[1]));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WitnessReport {
    /// Generator images, four components each, 12 digits.
    pub rep: Vec<[String; 4]>,
    pub residuals: Vec<String>,
    pub max_residual: String,
    pub restarts_used: usize,
}

fn fmt12(x: f64) -> String {
    format!("{x:.12}")
}

impl WitnessReport {
    pub fn from_witness(w: &Witness) -> Self {
        WitnessReport {
            rep: w
                .rep
                .0
                .iter()
                .map(|q: &Quat| [fmt12(q.r), fmt12(q.i), fmt12(q.j), fmt12(q.k)])
                .collect(),
            residuals: w.residuals.iter().map(|&r| format!("{r:.3e}")).collect(),
            max_residual: format!("{:.3e}", w.max_residual()),
            restarts_used: w.restarts_used,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct W2Section {
    pub lift_signs: Vec<u8>,
    pub pairing_sigma: u8,
    pub nonabelian: bool,
    pub non_toral: bool,
}

impl From<&W2Report> for W2Section {
    fn from(r: &W2Report) -> Self {
        W2Section {
            lift_signs: r.lift_signs.clone(),
            pairing_sigma: r.pairing_sigma,
            nonabelian: r.nonabelian,
            non_toral: r.non_toral,
        }
    }
}

/// Top-level report; unused sections stay `None` and are omitted from JSON.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_empirical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w2: Option<W2Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.profile {
            writeln!(f, "b1={} b2={} |T|={}", p.b1, p.b2, p.torsion_order)?;
        }
        if let Some(s) = &self.sigma {
            writeln!(f, "sigma = ({})", s.join(", "))?;
        }
        if let Some(m) = &self.mu {
            writeln!(f, "mu = {}", m.display)?;
        }
        if let Some(d) = self.decision {
            let verdict = if d { "HOLDS" } else { "FAILS" };
            match &self.reason {
                Some(r) => writeln!(f, "hypothesis {verdict}: {r}")?,
                None => writeln!(f, "hypothesis {verdict}")?,
            }
        }
        if let Some(p) = &self.prediction {
            writeln!(f, "prediction = ±{p}")?;
        }
        if let Some(d) = &self.degree_formula {
            writeln!(f, "degree (formula) = {d}")?;
        }
        if let Some(d) = &self.degree_empirical {
            writeln!(f, "degree (empirical) = {d}")?;
        }
        if let Some(a) = self.degree_agreement {
            writeln!(f, "verdict: {}", if a { "AGREE" } else { "DISAGREE" })?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness (after {} restarts):", w.restarts_used)?;
            for (i, q) in w.rep.iter().enumerate() {
                writeln!(f, "  x{} -> {} + {}·i + {}·j + {}·k", i + 1, q[0], q[1], q[2], q[3])?;
            }
            writeln!(f, "  max residual = {}", w.max_residual)?;
        }
        if let Some(w2) = &self.w2 {
            writeln!(
                f,
                "w2: lift signs {:?}, <w2, sigma> = {}, nonabelian = {}, non-toral = {}",
                w2.lift_signs, w2.pairing_sigma, w2.nonabelian, w2.non_toral
            )?;
        }
        if let Some(s) = self.seed {
            writeln!(f, "seed = {s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn mu_rendering() {
        let mut mu = ExteriorElement::zero(2, 4);
        mu.add_term(&[1, 3], BigInt::from(1));
        mu.add_term(&[2, 4], BigInt::from(1));
        assert_eq!(render_mu(&mu), "x1∧x3 + x2∧x4");

        let mut neg = ExteriorElement::zero(2, 2);
        neg.add_term(&[1, 2], BigInt::from(-3));
        assert_eq!(render_mu(&neg), "-3·x1∧x2");

        assert_eq!(render_mu(&ExteriorElement::zero(2, 2)), "0");
    }

    #[test]
    fn json_roundtrip() {
        let report = Report {
            command: "analyze".into(),
            profile: Some(ProfileReport {
                b1: 2,
                b2: 1,
                torsion_order: "1".into(),
            }),
            ..Default::default()
        };
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
