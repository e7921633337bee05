//! The complement of `hA` on a window, split by verdict, and its comparison
//! with the brute-force oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::classify::{certificate_holds, Classifier, Verdict};
use super::kx::kx_complement;
use super::{format_ranges, sample, Check, Status};
use crate::error::{Error, Result};
use crate::families::{Domain, Family};
use crate::intset::{DenseSet, Window};
use crate::sumset::{self, SumsetResult};

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub shifted_y: Vec<i64>,
    pub exceptional: Vec<i64>,
    pub unknown: Vec<i64>,
}

impl Catalog {
    pub fn from_verdicts(verdicts: &[(i64, Verdict)]) -> Self {
        let mut c = Catalog::default();
        for (n, v) in verdicts {
            match v {
                Verdict::InSumset { .. } => {}
                Verdict::OutShiftedY { .. } => c.shifted_y.push(*n),
                Verdict::OutExceptional { .. } => c.exceptional.push(*n),
                Verdict::Unknown => c.unknown.push(*n),
            }
        }
        c
    }

    /// Every integer decided to lie outside `hA`, ascending.
    pub fn complement(&self) -> Vec<i64> {
        let mut all: Vec<i64> = self.shifted_y.iter().chain(&self.exceptional).copied().collect();
        all.sort_unstable();
        all
    }
}

/// Verdicts for every domain integer of the window, in order.
pub fn classify_window(family: &Family, window: Window, budget: u64) -> Result<Vec<(i64, Verdict)>> {
    let Some(target) = family.domain().clip(window) else {
        return Ok(Vec::new());
    };
    let classifier = Classifier::new(family, budget)?;
    let parts = target
        .chunks(CHUNK)
        .into_par_iter()
        .map(|w| w.iter().map(|n| Ok((n, classifier.classify(n)?))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn complement_catalog(family: &Family, window: Window, budget: u64) -> Result<Catalog> {
    Ok(Catalog::from_verdicts(&classify_window(family, window, budget)?))
}

/// Radius of the symmetric truncation used for Z-families when none is
/// given: large enough that the decompositions the classifier produces for
/// the window stay inside it.
pub fn default_z_radius(family: &Family, window: Window) -> i64 {
    let reach = window.lo().unsigned_abs().max(window.hi().unsigned_abs()) as i64;
    2 * reach + 4 * family.h() * (family.s().abs() + family.t().abs() + 8)
}

/// Where the set has to be materialized for an oracle on `target`: from 0
/// over N0, `[-radius, radius]` (widened to cover the target) over Z.
pub fn source_window(domain: Domain, target: Window, z_radius: i64) -> Result<Window> {
    match domain {
        Domain::N0 => Window::new(0, target.hi().max(0)),
        Domain::Z => Window::new((-z_radius).min(target.lo()), z_radius.max(target.hi())),
    }
}

/// `hA ∩ target` for `A` given on `source`: exact over N0 (summands are
/// nonnegative), a sound lower bound over Z.
pub fn hfold_oracle(source: &DenseSet, domain: Domain, h: usize, target: Window) -> Result<SumsetResult> {
    match domain {
        Domain::N0 => sumset::hfold_exact_bounded_below(source, h, target),
        Domain::Z => sumset::hfold_truncated(source, h, target),
    }
}

pub fn family_oracle(family: &Family, target: Window, z_radius: i64) -> Result<SumsetResult> {
    let source = family.materialize(source_window(family.domain(), target, z_radius)?)?;
    hfold_oracle(&source, family.domain(), family.h() as usize, target)
}

/// Over N0, a bound `B` with every exceptional integer below `B`. Over Z the
/// exceptional part is empty (Y is bounded below) and `None` is returned.
pub fn exceptional_bound(family: &Family, budget: u64) -> Result<Option<i64>> {
    if family.domain() == Domain::Z {
        return Ok(None);
    }
    let (h, s, t) = (family.h(), family.s(), family.t());
    let x = family.x_set();
    let mut bound = ((h - 1) * s + t).max((h - 2) * s + h * t);
    for i in 0..=h - 2 {
        let k = h - i;
        let c = kx_complement(&x, k as usize, budget)?.last().map_or(0, |&m| m + 1);
        bound = bound.max(i * s + k * t + h * c);
    }
    Ok(Some(bound))
}

/// Certificates, oracle agreement, the predicted shifted-Y part,
/// disjointness and the location of the exceptional part.
pub fn catalog_checks(
    family: &Family,
    window: Window,
    verdicts: &[(i64, Verdict)],
    catalog: &Catalog,
    budget: u64,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let Some(target) = family.domain().clip(window) else {
        return Ok(checks);
    };

    let forged: Vec<i64> =
        verdicts.iter().filter(|(n, v)| !certificate_holds(family, *n, v)).map(|(n, _)| *n).collect();
    checks.push(Check::from_bool(
        "certificates",
        forged.is_empty(),
        format!("{} verdicts re-checked; invalid at {}", verdicts.len(), format_ranges(&forged)),
    ));

    let oracle = family_oracle(family, target, default_z_radius(family, target))?;
    match family.domain() {
        Domain::N0 => {
            let disagree: Vec<i64> = verdicts
                .iter()
                .filter(|(n, v)| *v != Verdict::Unknown && v.is_in() != oracle.dense.contains(*n))
                .map(|(n, _)| *n)
                .collect();
            checks.push(Check::from_bool(
                "oracle_agreement",
                disagree.is_empty(),
                format!("exact oracle on {target}; disagreements at {}", sample(&disagree, 16)),
            ));
        }
        Domain::Z => {
            let contradicted: Vec<i64> = verdicts
                .iter()
                .filter(|(n, v)| v.is_out() && oracle.dense.contains(*n))
                .map(|(n, _)| *n)
                .collect();
            let unconfirmed = verdicts.iter().filter(|(n, v)| v.is_in() && !oracle.dense.contains(*n)).count();
            checks.push(Check::from_bool(
                "oracle_soundness",
                contradicted.is_empty(),
                format!(
                    "truncated oracle on {}; out-verdicts it contains: {}; members beyond its reach: {unconfirmed}",
                    oracle.source,
                    format_ranges(&contradicted)
                ),
            ));
        }
    }

    let predicted: Vec<i64> = family.shifted_y_in(target).into_iter().map(|(_, n)| n).collect();
    checks.push(Check::from_bool(
        "shifted_y_predicted",
        predicted == catalog.shifted_y,
        format!("expected {}, classified {}", sample(&predicted, 12), sample(&catalog.shifted_y, 12)),
    ));

    let shifted = DenseSet::from_iter(target, catalog.shifted_y.iter().copied());
    let overlap: Vec<i64> = catalog.exceptional.iter().copied().filter(|&n| shifted.contains(n)).collect();
    checks.push(Check::from_bool(
        "disjoint",
        overlap.is_empty(),
        format!("shifted-Y and exceptional overlap at {}", format_ranges(&overlap)),
    ));

    checks.push(match exceptional_bound(family, budget) {
        Err(Error::BudgetExhausted { .. }) => {
            Check::unknown("exceptional_bounded", "probe budget exhausted while bounding the exceptional part")
        }
        Err(e) => return Err(e),
        Ok(Some(bound)) => {
            let late: Vec<i64> = catalog.exceptional.iter().copied().filter(|&n| n >= bound).collect();
            Check::from_bool(
                "exceptional_bounded",
                late.is_empty(),
                format!(
                    "exceptional {{{}}}, all below {bound}; at or above: {}",
                    sample(&catalog.exceptional, 24),
                    format_ranges(&late)
                ),
            )
        }
        Ok(None) => Check::from_bool(
            "exceptional_bounded",
            catalog.exceptional.is_empty(),
            format!("window-relative exceptional part: {{{}}}", sample(&catalog.exceptional, 24)),
        ),
    });

    checks.push(if catalog.unknown.is_empty() {
        Check::pass("unknowns", "none")
    } else {
        Check::unknown("unknowns", format!("undecided: {}", sample(&catalog.unknown, 16)))
    });
    Ok(checks)
}

/// Over Z: the truncated-oracle complement on the window is the same for
/// every radius and matches the catalog.
pub fn z_stability_check(family: &Family, window: Window, radii: &[i64], catalog: &Catalog) -> Result<Check> {
    let expected = catalog.complement();
    let mut details = Vec::new();
    let mut ok = true;
    for &r in radii {
        let oracle = family_oracle(family, window, r)?;
        let complement = oracle.dense.complement_in().enumerate();
        ok &= complement == expected;
        details.push(format!("R = {r}: {} outside", complement.len()));
    }
    Ok(Check::new(
        "truncation_stability",
        if ok { Status::Pass } else { Status::Fail },
        format!("{}; catalog has {}", details.join(", "), expected.len()),
    ))
}
