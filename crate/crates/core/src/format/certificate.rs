use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::LinalgError;
use crate::matroid::AxiomReport;
use crate::theorem::{
    check_conditions, verify_selection, BlockInstance, Certificate, ConditionCheck, Selection,
    SelectionDefect,
};

/// Version of the JSON output documents.
pub const CERTIFICATE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    Infeasible,
    Pass,
    Violation,
    Written,
    Verified,
    Rejected,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub format_version: u32,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            format_version: CERTIFICATE_FORMAT_VERSION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub row_blocks: usize,
    pub col_blocks: usize,
    pub total: usize,
}

impl InstanceEcho {
    pub fn of(inst: &BlockInstance) -> Self {
        InstanceEcho {
            field: inst.matrix().field().to_string(),
            rows: inst.matrix().n_rows(),
            cols: inst.matrix().n_cols(),
            row_blocks: inst.row_blocks().len(),
            col_blocks: inst.col_blocks().len(),
            total: inst.total(),
        }
    }
}

/// Verdict document written by `check`, `solve` and `oracle`.
///
/// Keys always appear in declaration order; fields that do not apply are
/// `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub status: Status,
    pub row_blocks_selected: Option<Vec<Vec<usize>>>,
    pub col_blocks_selected: Option<Vec<Vec<usize>>>,
    pub determinant: Option<String>,
    pub violating_row_blocks: Option<Vec<usize>>,
    pub violating_col_blocks: Option<Vec<usize>>,
    pub lhs_rank: Option<usize>,
    pub rhs_bound: Option<usize>,
    pub command: String,
    pub instance: InstanceEcho,
    pub tool: ToolInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReverifyError {
    #[error("certificate describes a {claimed:?} instance, not {actual:?}")]
    InstanceMismatch {
        claimed: Box<InstanceEcho>,
        actual: Box<InstanceEcho>,
    },
    #[error("selection rejected: {0:?}")]
    SelectionRejected(SelectionDefect),
    #[error("determinant {claimed} does not match recomputed {actual}")]
    DeterminantMismatch { claimed: String, actual: String },
    #[error("violation does not hold: recomputed rank {rank} against bound {bound}")]
    ViolationMismatch { rank: usize, bound: usize },
    #[error("verdict {0:?} contradicts the rank conditions")]
    VerdictMismatch(Status),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

impl CertificateDocument {
    fn blank(command: &str, status: Status, inst: &BlockInstance) -> Self {
        CertificateDocument {
            status,
            row_blocks_selected: None,
            col_blocks_selected: None,
            determinant: None,
            violating_row_blocks: None,
            violating_col_blocks: None,
            lhs_rank: None,
            rhs_bound: None,
            command: command.to_string(),
            instance: InstanceEcho::of(inst),
            tool: ToolInfo::current(),
            seed: None,
        }
    }

    pub fn from_certificate(command: &str, inst: &BlockInstance, cert: &Certificate) -> Self {
        match cert {
            Certificate::Feasible {
                selection,
                determinant,
            } => {
                let mut doc = Self::blank(command, Status::Feasible, inst);
                doc.row_blocks_selected = Some(selection.row_picks.clone());
                doc.col_blocks_selected = Some(selection.col_picks.clone());
                doc.determinant = Some(determinant.to_string());
                doc
            }
            Certificate::Infeasible(v) => {
                let mut doc = Self::blank(command, Status::Infeasible, inst);
                doc.violating_row_blocks = Some(v.row_blocks.clone());
                doc.violating_col_blocks = Some(v.col_blocks.clone());
                doc.lhs_rank = Some(v.lhs_rank);
                doc.rhs_bound = Some(v.rhs_bound);
                doc
            }
        }
    }

    /// Verdict only; a feasible check carries no selection.
    pub fn from_check(inst: &BlockInstance, check: &ConditionCheck) -> Self {
        match &check.violation {
            None => Self::blank("check", Status::Feasible, inst),
            Some(v) => Self::from_certificate("check", inst, &Certificate::Infeasible(v.clone())),
        }
    }

    /// Brute-force result; an infeasible verdict carries no violation.
    pub fn from_brute_force(
        inst: &BlockInstance,
        found: Option<&Selection>,
    ) -> Result<Self, LinalgError> {
        Ok(match found {
            None => Self::blank("oracle", Status::Infeasible, inst),
            Some(sel) => {
                let determinant = inst
                    .matrix()
                    .submatrix(&sel.rows(), &sel.cols())?
                    .determinant()?;
                Self::from_certificate(
                    "oracle",
                    inst,
                    &Certificate::Feasible {
                        selection: sel.clone(),
                        determinant,
                    },
                )
            }
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serialises");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Re-derives the verdict against `inst`.
    ///
    /// Selections are re-checked block by block with a fresh nonsingularity
    /// test; violations are re-checked with an independent rank computation.
    /// Verdicts without evidence are compared with the rank conditions.
    pub fn reverify(&self, inst: &BlockInstance) -> Result<(), ReverifyError> {
        let actual = InstanceEcho::of(inst);
        if self.instance != actual {
            return Err(ReverifyError::InstanceMismatch {
                claimed: Box::new(self.instance.clone()),
                actual: Box::new(actual),
            });
        }
        match self.status {
            Status::Feasible => self.reverify_feasible(inst),
            Status::Infeasible => self.reverify_infeasible(inst),
            other => Err(ReverifyError::Malformed(format!(
                "status {other:?} is not a verdict"
            ))),
        }
    }

    fn reverify_feasible(&self, inst: &BlockInstance) -> Result<(), ReverifyError> {
        let (Some(rows), Some(cols)) = (&self.row_blocks_selected, &self.col_blocks_selected)
        else {
            return match check_conditions(inst) {
                Ok(check) if check.feasible => Ok(()),
                _ => Err(ReverifyError::VerdictMismatch(Status::Feasible)),
            };
        };
        let sel = Selection {
            row_picks: rows.clone(),
            col_picks: cols.clone(),
        };
        verify_selection(inst, &sel).map_err(ReverifyError::SelectionRejected)?;
        if let Some(claimed) = &self.determinant {
            let actual = inst
                .matrix()
                .submatrix(&sel.rows(), &sel.cols())
                .and_then(|m| m.determinant())
                .map_err(|e| ReverifyError::Malformed(e.to_string()))?
                .to_string();
            if *claimed != actual {
                return Err(ReverifyError::DeterminantMismatch {
                    claimed: claimed.clone(),
                    actual,
                });
            }
        }
        Ok(())
    }

    fn reverify_infeasible(&self, inst: &BlockInstance) -> Result<(), ReverifyError> {
        let (Some(ib), Some(kb)) = (&self.violating_row_blocks, &self.violating_col_blocks) else {
            return match check_conditions(inst) {
                Ok(check) if !check.feasible => Ok(()),
                _ => Err(ReverifyError::VerdictMismatch(Status::Infeasible)),
            };
        };
        let out_of_range = ib.iter().any(|&i| i >= inst.row_blocks().len())
            || kb.iter().any(|&k| k >= inst.col_blocks().len());
        if out_of_range {
            return Err(ReverifyError::Malformed("block index out of range".into()));
        }
        let rows: Vec<usize> = ib
            .iter()
            .flat_map(|&i| inst.row_blocks()[i].iter().copied())
            .collect();
        let cols: Vec<usize> = kb
            .iter()
            .flat_map(|&k| inst.col_blocks()[k].iter().copied())
            .collect();
        let rank = inst
            .matrix()
            .submatrix(&rows, &cols)
            .map_err(|e| ReverifyError::Malformed(e.to_string()))?
            .rank();
        let demand: usize = ib.iter().map(|&i| inst.row_quotas()[i]).sum::<usize>()
            + kb.iter().map(|&k| inst.col_quotas()[k]).sum::<usize>();
        let bound = demand.saturating_sub(inst.total());
        if rank >= bound || self.lhs_rank != Some(rank) || self.rhs_bound != Some(bound) {
            return Err(ReverifyError::ViolationMismatch { rank, bound });
        }
        Ok(())
    }
}

/// Output of the `axioms` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomsDocument {
    pub status: Status,
    pub matroid: AxiomReport,
    pub bimatroid: AxiomReport,
    pub rank_exchange: AxiomReport,
    pub instance: InstanceEcho,
    pub tool: ToolInfo,
}

impl AxiomsDocument {
    pub fn new(
        inst: &BlockInstance,
        matroid: AxiomReport,
        bimatroid: AxiomReport,
        rank_exchange: AxiomReport,
    ) -> Self {
        let passed = matroid.passed && bimatroid.passed && rank_exchange.passed;
        AxiomsDocument {
            status: if passed {
                Status::Pass
            } else {
                Status::Violation
            },
            matroid,
            bimatroid,
            rank_exchange,
            instance: InstanceEcho::of(inst),
            tool: ToolInfo::current(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serialises");
        out.push('\n');
        out
    }
}

/// Written to standard error whenever a command fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDocument {
    pub status: Status,
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    pub tool: ToolInfo,
}

impl ErrorDocument {
    pub fn new(error: &str, message: impl Into<String>) -> Self {
        ErrorDocument {
            status: Status::Error,
            error: error.to_string(),
            message: message.into(),
            line: None,
            column: None,
            tool: ToolInfo::current(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serialises");
        out.push('\n');
        out
    }
}
