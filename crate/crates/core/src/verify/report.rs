use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SchattenP;
use crate::tolerance::tolerances;

pub const REPORT_SCHEMA: &str = "marginreport/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StatementId {
    /// `‖[[A,X],[X*,B]]‖ ≤ ‖A+B+ωI‖`.
    Thm11,
    /// `‖block‖ ≥ ‖((A+B)/2+dI) ⊕ ((A+B)/2−dI)‖`.
    RevBl2,
    /// `λ_{1+2j}(block) ≤ λ_{1+j}(A+B) + δ₂(X)`.
    Thm21,
    /// `λ_{2n−1}(block) ≤ λ_n(A+B)`.
    Thm21Refined,
    /// `λ_{1+2j}(block) ≤ λ_{1+j}(A+B) + dist(X, ℂI)`.
    Cor22,
    /// `λ_{1+2j}(A*A+B*B) ≤ λ_{1+j}(AA*+BB*) + δ₂(AB*)`.
    Cor23,
    /// Normal off-diagonal block with spectrum in a disc of radius `r`.
    Cor24,
    /// `‖XH²X+X⁻¹K²X⁻¹‖∞ ≤ ‖HX²H+KX⁻²K‖∞ + 1`.
    Cor35,
    /// Power-pair lower bound for `δ₂`.
    Cor36,
    /// Translated lower bound for the inradius.
    Cor37,
    /// Frobenius bound for normal off-diagonal blocks, with the trace bound.
    Prop34Fwd,
    /// Strict failure of the Frobenius bound at the modulus witness.
    Prop34Wit,
    /// `δ₂(X) ≥ 2‖X‖∞ − ‖|X|+|X*|‖∞`.
    Prop39,
}

impl StatementId {
    pub const ALL: [StatementId; 13] = [
        Self::Thm11,
        Self::RevBl2,
        Self::Thm21,
        Self::Thm21Refined,
        Self::Cor22,
        Self::Cor23,
        Self::Cor24,
        Self::Cor35,
        Self::Cor36,
        Self::Cor37,
        Self::Prop34Fwd,
        Self::Prop34Wit,
        Self::Prop39,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Thm11 => "THM11",
            Self::RevBl2 => "REV_BL2",
            Self::Thm21 => "THM21",
            Self::Thm21Refined => "THM21_REFINED",
            Self::Cor22 => "COR22",
            Self::Cor23 => "COR23",
            Self::Cor24 => "COR24",
            Self::Cor35 => "COR35",
            Self::Cor36 => "COR36",
            Self::Cor37 => "COR37",
            Self::Prop34Fwd => "PROP34_FWD",
            Self::Prop34Wit => "PROP34_WIT",
            Self::Prop39 => "PROP39",
        }
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatementId {
    type Err = Error;

    /// Case-insensitive; `PROP34` selects the forward check.
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        if up == "PROP34" {
            return Ok(Self::Prop34Fwd);
        }
        Self::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| Error::Parse(format!("unknown statement {s:?}")))
    }
}

/// Whether the statement asserts `lhs ≤ rhs`, or the report is a witness
/// that must satisfy `lhs > rhs` strictly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Inequality,
    Witness,
}

/// Minimum `lhs − rhs` a witness must show.
pub const WITNESS_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub statement_id: StatementId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub norm_p: Option<SchattenP>,
    pub inputs_digest: String,
    pub seed: u64,
    /// True when the right-hand side only used certified upper bounds.
    pub sound: bool,
    pub kind: ReportKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl MarginReport {
    pub fn new(statement_id: StatementId, lhs: f64, rhs: f64, digest: &str, seed: u64) -> Self {
        Self {
            statement_id,
            j: None,
            lhs,
            rhs,
            slack: rhs - lhs,
            norm_p: None,
            inputs_digest: digest.to_string(),
            seed,
            sound: true,
            kind: ReportKind::Inequality,
            note: None,
        }
    }

    pub fn with_j(mut self, j: usize) -> Self {
        self.j = Some(j);
        self
    }

    pub fn with_p(mut self, p: SchattenP) -> Self {
        self.norm_p = Some(p);
        self
    }

    pub fn informational(mut self) -> Self {
        self.sound = false;
        self
    }

    pub fn witness(mut self) -> Self {
        self.kind = ReportKind::Witness;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Scale used by the relative tolerances.
    pub fn scale(&self) -> f64 {
        1.0 + self.rhs.abs()
    }

    /// A sound inequality with `slack < −1e-8·(1+|rhs|)`, or a witness whose
    /// margin `lhs − rhs` is not above [`WITNESS_MARGIN`].
    pub fn is_violation(&self) -> bool {
        match self.kind {
            ReportKind::Inequality => self.sound && self.slack < -tolerances().inequality_slack * self.scale(),
            ReportKind::Witness => !(-self.slack > WITNESS_MARGIN),
        }
    }

    /// Near-equality of a passing inequality.
    pub fn is_tight(&self) -> bool {
        self.kind == ReportKind::Inequality
            && !self.is_violation()
            && self.slack < tolerances().tight_slack * self.scale()
    }

    pub const CSV_HEADER: &'static str = "statement,j,p,lhs,rhs,slack,sound,kind,violation,seed,digest,note";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.statement_id,
            self.j.map_or(String::new(), |j| j.to_string()),
            self.norm_p.map_or(String::new(), |p| p.to_string()),
            self.lhs,
            self.rhs,
            self.slack,
            self.sound,
            match self.kind {
                ReportKind::Inequality => "inequality",
                ReportKind::Witness => "witness",
            },
            self.is_violation(),
            self.seed,
            self.inputs_digest,
            self.note.as_deref().unwrap_or("")
        )
    }
}
