//! Structural membership decisions for `hA` with certificates, and the
//! windowed checks that compare them against the sumset oracle.

mod catalog;
mod classify;
mod escape;
mod kx;
mod presets;

use serde::Serialize;

pub use catalog::{
    catalog_checks, classify_window, complement_catalog, default_z_radius, exceptional_bound,
    family_oracle, hfold_oracle, source_window, z_stability_check, Catalog,
};
pub use classify::{
    certificate_holds, classify, residue_decompose, unique_rep_z1, Classifier, ExceptionalTag,
    ResidueDecomposition, Verdict,
};
pub use escape::{
    augment_check, escape_check, residue_case, sample_escape_points, AugmentReport, AugmentVerdict,
    EscapeReport, EscapeVerdict, ResidueCase, YSelection,
};
pub use kx::{
    bad_u, decide_kx, kx_complement, kx_threshold, lemma_basis_check, two_fold_threshold,
    KxDecision, LemmaReport, DEFAULT_BUDGET,
};
pub use presets::{dichotomy_checks, uniqueness_check, verify_full, verify_gapped, verify_lemma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, details: impl Into<String>) -> Self {
        Check { name: name.into(), status, details: details.into() }
    }

    pub fn pass(name: impl Into<String>, details: impl Into<String>) -> Self {
        Check::new(name, Status::Pass, details)
    }

    pub fn fail(name: impl Into<String>, details: impl Into<String>) -> Self {
        Check::new(name, Status::Fail, details)
    }

    pub fn unknown(name: impl Into<String>, details: impl Into<String>) -> Self {
        Check::new(name, Status::Unknown, details)
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, details)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Worst status of a list: any failure wins over unknowns.
pub fn overall(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Unknown) {
        Status::Unknown
    } else {
        Status::Pass
    }
}

/// Short rendering of a sorted list, e.g. `3, 5, 9..12`.
pub fn format_ranges(values: &[i64]) -> String {
    if values.is_empty() {
        return "none".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] == values[j] + 1 {
            j += 1;
        }
        match j - i {
            0 => parts.push(values[i].to_string()),
            1 => {
                parts.push(values[i].to_string());
                parts.push(values[j].to_string());
            }
            _ => parts.push(format!("{}..{}", values[i], values[j])),
        }
        i = j + 1;
    }
    parts.join(", ")
}

/// At most `limit` entries of a list, with a count of the rest.
pub(crate) fn sample(values: &[i64], limit: usize) -> String {
    if values.len() <= limit {
        return format_ranges(values);
    }
    format!("{}, ... ({} total)", format_ranges(&values[..limit]), values.len())
}
