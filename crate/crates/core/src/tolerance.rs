//! Numerical tolerances shared by every module.
//!
//! The active set is process-wide and read-only once installed. Callers that
//! never install one get [`Tolerances::default`].

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative Hermitian symmetry check, `‖S − S*‖_F ≤ tol·(1+‖S‖_F)`.
    pub symmetry: f64,
    /// Relative PSD check for single matrices, `λ_min ≥ −tol·(1+‖S‖∞)`.
    pub psd: f64,
    /// Relative PSD check for assembled block matrices.
    pub block_psd: f64,
    /// Reconstruction residuals of factorizations.
    pub reconstruction: f64,
    /// Relative slack below which a sound report counts as a violation.
    pub inequality_slack: f64,
    /// Relative slack below which a report is listed as tight.
    pub tight_slack: f64,
    /// Normality defect accepted as "normal".
    pub normality: f64,
    /// Relative width below which a range is treated as a segment.
    pub segment_width: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-10,
            psd: 1e-10,
            block_psd: 1e-9,
            reconstruction: 1e-9,
            inequality_slack: 1e-8,
            tight_slack: 1e-6,
            normality: 1e-9,
            segment_width: 1e-8,
        }
    }
}

static ACTIVE: OnceLock<Tolerances> = OnceLock::new();

/// The active tolerance set.
pub fn tolerances() -> &'static Tolerances {
    ACTIVE.get_or_init(Tolerances::default)
}

/// Install a tolerance set. Fails (returning the rejected value) if one is
/// already active.
pub fn install(tol: Tolerances) -> Result<(), Tolerances> {
    ACTIVE.set(tol)
}
