//! Serializable analysis report. Field order in the output is alphabetical
//! because everything goes through `serde_json::Value`.

use coflow_core::engine::{TraceEntry, Verdict};
use coflow_core::gofront::{Analysis, CaseVerdict};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub file: String,
    pub verdicts: Vec<CaseReport>,
    pub warnings: Vec<String>,
    pub steps: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    /// Case constraint when the analysis split on an input-dependent branch.
    pub case: Option<String>,
    pub verdict: String,
    pub residual: Option<String>,
    pub externals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceLine>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub step: usize,
    pub rule: String,
    pub state: String,
}

impl From<&TraceEntry> for TraceLine {
    fn from(e: &TraceEntry) -> Self {
        TraceLine {
            step: e.step,
            rule: e.rule.name().to_string(),
            state: e.state.clone(),
        }
    }
}

impl Report {
    pub fn new(file: &str, analysis: &Analysis, with_trace: bool) -> Self {
        Report {
            file: file.to_string(),
            verdicts: analysis
                .cases
                .iter()
                .map(|c| CaseReport::new(c, with_trace))
                .collect(),
            warnings: analysis.warnings.clone(),
            steps: analysis.total_steps(),
            elapsed_ms: analysis.elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is plain data");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let overall = ["unsupported", "deadlock", "inconclusive", "no-deadlock"]
            .into_iter()
            .find(|v| self.verdicts.iter().any(|c| c.verdict == *v))
            .unwrap_or("no-deadlock");
        out.push_str(&format!("{}: {overall}\n", self.file));
        let split = self.verdicts.len() > 1 || self.verdicts.iter().any(|c| c.case.is_some());
        for c in &self.verdicts {
            let indent = if split {
                out.push_str(&format!(
                    "  case {}: {}\n",
                    c.case.as_deref().unwrap_or("-"),
                    c.verdict
                ));
                "    "
            } else {
                "  "
            };
            if let Some(r) = &c.residual {
                out.push_str(&format!("{indent}residual: {r}\n"));
            }
            if !c.externals.is_empty() {
                out.push_str(&format!(
                    "{indent}external yields: {}\n",
                    c.externals.join(", ")
                ));
            }
            if let Some(reason) = &c.reason {
                out.push_str(&format!("{indent}reason: {reason}\n"));
            }
            for t in c.trace.iter().flatten() {
                out.push_str(&format!(
                    "{indent}step {} [{}] {}\n",
                    t.step, t.rule, t.state
                ));
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(&format!(
            "{} steps, {:.2} ms\n",
            self.steps, self.elapsed_ms
        ));
        out
    }
}

impl CaseReport {
    fn new(c: &CaseVerdict, with_trace: bool) -> Self {
        let (residual, externals, reason) = match &c.verdict {
            Verdict::NoDeadlock => (Some("0".to_string()), Vec::new(), None),
            Verdict::Deadlock {
                residual,
                externals,
            } => (
                Some(residual.to_string()),
                externals.iter().map(ToString::to_string).collect(),
                None,
            ),
            Verdict::Inconclusive { steps } => (
                None,
                Vec::new(),
                Some(format!("step cap reached after {steps} steps")),
            ),
            Verdict::Unsupported(feature) => (None, Vec::new(), Some(feature.clone())),
        };
        CaseReport {
            case: c.label.clone(),
            verdict: c.verdict.name().to_string(),
            residual,
            externals,
            reason,
            trace: with_trace.then(|| c.trace.iter().map(TraceLine::from).collect()),
        }
    }
}

/// Exit status from the verdict names alone.
pub fn exit_code<'a>(verdicts: impl IntoIterator<Item = &'a str>) -> u8 {
    let names: Vec<&str> = verdicts.into_iter().collect();
    if names.contains(&"unsupported") {
        2
    } else if names.contains(&"deadlock") {
        1
    } else if names.contains(&"inconclusive") {
        3
    } else {
        0
    }
}
