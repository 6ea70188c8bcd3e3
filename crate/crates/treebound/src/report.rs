//! Machine-checkable classification reports.
//!
//! Every classifier returns a [`ClassificationReport`]: the list of
//! hypotheses it checked with certificates, an optional verdict carrying
//! stable citation keys, and warnings with stable codes. Reports render
//! to deterministic text and round-trip through JSON.

use serde::{Deserialize, Serialize};

/// Stable warning codes.
pub mod warning_codes {
    /// The unimodularity criterion in one published example swaps `k != l`
    /// for `|k| != |l|`; the implementation uses absolute values.
    pub const UNIMOD_TYPO: &str = "W-UNIMOD-TYPO";
    /// The non-Euclidean part of the factor decomposition is empty; the
    /// structure statement degenerates to its Euclidean tensor factors.
    pub const DEGENERATE_GAMMA_PRIME: &str = "W-DEGENERATE-GAMMA-PRIME";
    /// The graph of groups has a singular edge; boundary dynamics are
    /// refused.
    pub const SINGULAR: &str = "W-SINGULAR";
    /// The boundary is finite, so dynamical statements degenerate.
    pub const FINITE_BOUNDARY: &str = "W-FINITE-BOUNDARY";
    /// Boundary points are modelled as eventually periodic rays only; a
    /// group element can move such a ray outside the model.
    pub const EVENTUALLY_PERIODIC_MODEL: &str = "W-EP-POINTS";
}

/// Stable citation keys attached to verdicts.
pub mod citations {
    pub const THM_A: &str = "thm-A";
    pub const THM_B1: &str = "thm-B1";
    pub const THM_B2: &str = "thm-B2";
    pub const THM_C: &str = "thm-C";
    pub const THM_D: &str = "thm-D";
    pub const COR_STRUCTURE: &str = "cor-structure";
    pub const PROP_UNIMODULAR: &str = "prop-unimodular";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    /// What was actually checked: a witness, a counterexample, or the
    /// bound that was exhausted.
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Stable machine-readable conclusion keys, e.g. `cstar-simple`.
    pub keys: Vec<String>,
    pub text: String,
    pub citations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub code: String,
    pub message: String,
}

/// Overall outcome, which also fixes the process exit code of the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// All hypotheses verified; the verdict applies.
    Established,
    /// At least one hypothesis failed with a certificate.
    HypothesisFailed,
    /// A bounded search ran out of budget before deciding.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// Short description of the instance that was classified.
    pub instance: String,
    pub hypotheses: Vec<Hypothesis>,
    pub verdict: Option<Verdict>,
    pub warnings: Vec<Warning>,
    pub outcome: Outcome,
}

impl ClassificationReport {
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Established => 0,
            Outcome::HypothesisFailed => 1,
            Outcome::Inconclusive => 2,
        }
    }

    /// Deterministic plain text rendering, one fact per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("instance: {}\n", self.instance));
        for h in &self.hypotheses {
            let mark = if h.holds { "ok" } else { "FAIL" };
            out.push_str(&format!("hypothesis [{mark}] {}: {}\n", h.name, h.certificate));
        }
        match &self.verdict {
            Some(v) => {
                out.push_str(&format!("verdict: {}\n", v.text));
                out.push_str(&format!("keys: {}\n", v.keys.join(", ")));
                out.push_str(&format!("cites: {}\n", v.citations.join(", ")));
            }
            None => out.push_str("verdict: none\n"),
        }
        for w in &self.warnings {
            out.push_str(&format!("warning [{}] {}\n", w.code, w.message));
        }
        out.push_str(&format!(
            "outcome: {}\n",
            match self.outcome {
                Outcome::Established => "established",
                Outcome::HypothesisFailed => "hypothesis-failed",
                Outcome::Inconclusive => "inconclusive",
            }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let report = ClassificationReport {
            instance: "BS(2,3)".into(),
            hypotheses: vec![Hypothesis {
                name: "minimal".into(),
                holds: true,
                certificate: "no trapped cycle".into(),
            }],
            verdict: Some(Verdict {
                keys: vec!["cstar-simple".into()],
                text: "simple".into(),
                citations: vec![citations::THM_D.into()],
            }),
            warnings: vec![Warning {
                code: warning_codes::UNIMOD_TYPO.into(),
                message: "criterion uses |k| != |l|".into(),
            }],
            outcome: Outcome::Established,
        };
        let json = serde_json::to_string(&report).unwrap();
        let back: ClassificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn text_rendering_is_stable() {
        let report = ClassificationReport {
            instance: "x".into(),
            hypotheses: vec![],
            verdict: None,
            warnings: vec![],
            outcome: Outcome::Inconclusive,
        };
        assert_eq!(report.render_text(), "instance: x\nverdict: none\noutcome: inconclusive\n");
        assert_eq!(report.exit_code(), 2);
    }
}
