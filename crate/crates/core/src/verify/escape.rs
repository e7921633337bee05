//! Adjoining outside elements to `A`: single elements `b` by residue class,
//! and whole progressions `{h y + t : y ∈ Y'}` for selections `Y' ⊆ Y`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::catalog::{default_z_radius, exceptional_bound, hfold_oracle, source_window};
use super::kx::{decide_kx, kx_complement, KxDecision};
use super::{format_ranges, overall, sample, Check, Status};
use crate::error::{Error, Result};
use crate::families::{Domain, Family};
use crate::intset::{DenseSet, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ResidueCase {
    /// `b ≢ s, t (mod h)`
    #[serde(rename = "not_st")]
    NotST,
    #[serde(rename = "eq_s")]
    EqS,
    #[serde(rename = "eq_t")]
    EqT,
}

impl fmt::Display for ResidueCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidueCase::NotST => "not_st",
            ResidueCase::EqS => "eq_s",
            ResidueCase::EqT => "eq_t",
        })
    }
}

pub fn residue_case(family: &Family, b: i64) -> ResidueCase {
    let h = family.h();
    let r = b.rem_euclid(h);
    if r == family.s().rem_euclid(h) {
        ResidueCase::EqS
    } else if r == family.t().rem_euclid(h) {
        ResidueCase::EqT
    } else {
        ResidueCase::NotST
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum EscapeVerdict {
    /// Every shifted-Y element at or above `threshold` (all of them when
    /// absent) is covered; `exceptions` are the ones in the window that are not.
    BecomesBasis { threshold: Option<i64>, exceptions: Vec<i64> },
    /// `added` are the window's new sums; `remaining_shifted` samples the
    /// shifted-Y elements that stay out.
    StaysNonbasis { added: Vec<i64>, remaining_shifted: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeReport {
    pub b: i64,
    pub residue_case: ResidueCase,
    pub verdict: EscapeVerdict,
    pub checks: Vec<Check>,
}

impl EscapeReport {
    pub fn status(&self) -> Status {
        overall(&self.checks)
    }
}

struct Setting {
    target: Window,
    source: Window,
    a: DenseSet,
    shifted: Vec<(i64, i64)>,
}

fn setting(family: &Family, window: Window, extra_reach: i64) -> Result<Setting> {
    if !family.is_gapped() {
        return Err(Error::InvalidParameter("escape and augmentation checks need a gapped family".into()));
    }
    let target = family
        .domain()
        .clip(window)
        .ok_or_else(|| Error::DomainConstraint(format!("window {window} lies outside N0")))?;
    let radius = default_z_radius(family, target) + extra_reach;
    let source = source_window(family.domain(), target, radius)?;
    Ok(Setting { target, source, a: family.materialize(source)?, shifted: family.shifted_y_in(target) })
}

fn subset(values: &[i64], set: impl Fn(i64) -> bool) -> Vec<i64> {
    values.iter().copied().filter(|&n| set(n)).collect()
}

/// Adjoins `b ∉ A` and checks the effect on the window against the residue
/// case analysis: for `b ≢ t` all but finitely many shifted-Y elements become
/// sums, for `b ≡ t` the new sums are confined to the exceptional part and
/// `(h - 1) s + b`.
pub fn escape_check(family: &Family, b: i64, window: Window, budget: u64) -> Result<EscapeReport> {
    if !family.domain().contains(b) {
        return Err(Error::OutsideDomain { n: b });
    }
    if family.contains(b) {
        return Err(Error::BNotOutside { b });
    }
    let st = setting(family, window, family.h() * b.abs())?;
    let (h, s, t) = (family.h(), family.s(), family.t());
    let hu = h as usize;
    let x = family.x_set();
    let mut ab = st.a.clone();
    ab = ab.union(&DenseSet::from_iter(st.source, [b]));
    let ha = hfold_oracle(&st.a, family.domain(), hu, st.target)?.dense;
    let hab = hfold_oracle(&ab, family.domain(), hu, st.target)?.dense;
    let f_bound = exceptional_bound(family, budget)?;
    let case = residue_case(family, b);
    let mut checks = Vec::new();

    if case == ResidueCase::EqT {
        let y_prime = (b - t) / h;
        let extra = (h - 1) * s + b;
        let shifted_n: Vec<i64> = st.shifted.iter().map(|&(_, n)| n).collect();
        let shifted_set = DenseSet::from_iter(st.target, shifted_n.iter().copied());
        let added = hab.difference(&ha).enumerate();
        let remaining: Vec<i64> =
            st.shifted.iter().filter(|&&(y, _)| y != y_prime).map(|&(_, n)| n).collect();
        if st.target.contains(extra) {
            checks.push(Check::from_bool(
                "extra_sum_present",
                hab.contains(extra),
                format!("(h - 1) s + b = {extra}"),
            ));
        }
        let entered = subset(&remaining, |n| hab.contains(n));
        checks.push(Check::from_bool(
            "shifted_remain_out",
            entered.is_empty(),
            format!("{} shifted-Y elements besides y' = {y_prime}; now sums: {}", remaining.len(), format_ranges(&entered)),
        ));
        if family.domain() == Domain::N0 {
            let exceptional = ha.complement_in().difference(&shifted_set);
            let stray = subset(&added, |n| n != extra && !exceptional.contains(n));
            checks.push(Check::from_bool(
                "added_within_prediction",
                stray.is_empty(),
                format!(
                    "added {{{}}}, exceptional {{{}}}; outside both and {extra}: {}",
                    sample(&added, 16),
                    sample(&exceptional.enumerate(), 16),
                    format_ranges(&stray)
                ),
            ));
        }
        let remaining_out = subset(&remaining, |n| !hab.contains(n));
        return Ok(EscapeReport {
            b,
            residue_case: case,
            verdict: EscapeVerdict::StaysNonbasis {
                added,
                remaining_shifted: remaining_out.into_iter().take(8).collect(),
            },
            checks,
        });
    }

    // For each shifted-Y element, a representation through b whenever the
    // case's sufficient condition holds; collect the elements where it fails.
    let mut certified = Vec::new();
    let mut uncertain = Vec::new();
    let threshold: Option<i64>;
    match case {
        ResidueCase::NotST => {
            let diff = s - t;
            let inverse = diff.extended_gcd(&h).x.rem_euclid(h);
            let i = ((t - b) * inverse - 1).rem_euclid(h);
            let k = h - i - 1;
            let mut structural = None;
            if family.domain() == Domain::N0 {
                let c = kx_complement(&x, k as usize, budget)?.last().map_or(0, |&m| m + 1);
                structural = Some((b + (h - 3) * s + (h - 1) * t).max(b + i * s + k * t + h * c));
            }
            threshold = structural;
            for &(_, n) in &st.shifted {
                let (w, rem) = (n - b - i * s - k * t).div_rem(&h);
                if rem != 0 {
                    return Err(Error::InvalidParameter(format!("congruence for b = {b} has no solution")));
                }
                match decide_kx(&x, k as usize, w, budget)? {
                    KxDecision::In { xs } => {
                        let sum: i64 = b + i * s + xs.iter().map(|&v| h * v + t).sum::<i64>();
                        if sum == n {
                            certified.push(n);
                        } else {
                            uncertain.push(n);
                        }
                    }
                    _ => uncertain.push(n),
                }
            }
            checks.push(Check::pass(
                "congruence",
                format!("(i + 1)(s - t) ≡ t - b (mod h) at i = {i}; {k} summands from X"),
            ));
        }
        ResidueCase::EqS => {
            let u = (b - s) / h;
            let y = family.y().expect("gapped");
            let spread = ((h - 1) as u64) * u.unsigned_abs();
            let mut y_thr = y.gap_radius(spread)?;
            if family.domain() == Domain::N0 && u > 0 {
                y_thr = y_thr.max((h - 1) * u - 1);
            }
            threshold = Some((h - 1) * s + h * y_thr + t + 1);
            for &(yv, n) in &st.shifted {
                let z = yv - (h - 1) * u;
                if x.contains(z) && (h - 1) * b + h * z + t == n {
                    certified.push(n);
                } else {
                    uncertain.push(n);
                }
            }
            checks.push(Check::pass("congruence", format!("b = s + h u with u = {u}")));
        }
        ResidueCase::EqT => unreachable!(),
    }

    let uncovered_certified = subset(&certified, |n| !hab.contains(n));
    checks.push(Check::from_bool(
        "coverage_condition_sound",
        uncovered_certified.is_empty(),
        format!("{} shifted-Y elements with a representation through b; missing from the oracle: {}", certified.len(), format_ranges(&uncovered_certified)),
    ));
    let exceptions: Vec<i64> = st.shifted.iter().map(|&(_, n)| n).filter(|&n| !hab.contains(n)).collect();
    let unpredicted = subset(&exceptions, |n| !uncertain.contains(&n));
    checks.push(Check::from_bool(
        "exceptions_predicted",
        unpredicted.is_empty(),
        format!("exceptions {{{}}}; not predicted: {}", format_ranges(&exceptions), format_ranges(&unpredicted)),
    ));
    let cut = match (threshold, f_bound) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let complement = hab.complement_in().enumerate();
    let from = cut.unwrap_or(i64::MIN);
    let late = subset(&complement, |n| n >= from);
    let status = if cut.is_some_and(|c| c > st.target.hi()) {
        Status::Unknown
    } else if late.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    checks.push(Check::new(
        "complement_above_threshold",
        status,
        format!(
            "threshold {}; window {}; missing at or above it: {}",
            cut.map_or("none".to_string(), |c| c.to_string()),
            st.target,
            sample(&late, 16)
        ),
    ));
    Ok(EscapeReport {
        b,
        residue_case: case,
        verdict: EscapeVerdict::BecomesBasis { threshold: cut, exceptions },
        checks,
    })
}

/// Up to `per_case` outside elements of each residue case inside the
/// window, nearest to 0 first. For `b ≡ t` these are `h y + t` for the first
/// elements of Y, followed over N0 by any `b < t` of that class.
pub fn sample_escape_points(family: &Family, per_case: usize, window: Window) -> Vec<(ResidueCase, i64)> {
    let (h, s, t) = (family.h(), family.s(), family.t());
    let Some(target) = family.domain().clip(window) else {
        return Vec::new();
    };
    let usable = |b: i64| target.contains(b) && family.domain().contains(b) && !family.contains(b);
    let near_zero = (0i64..).map(|j| if j % 2 == 1 { j / 2 + 1 } else { -(j / 2) });
    let span = 2 * (target.width().min(1 << 20) as usize) + 2;
    let mut out = Vec::new();
    if h >= 3 {
        out.extend(
            near_zero
                .clone()
                .take(span)
                .filter(|&b| usable(b) && residue_case(family, b) == ResidueCase::NotST)
                .take(per_case)
                .map(|b| (ResidueCase::NotST, b)),
        );
    }
    out.extend(
        near_zero
            .skip(1)
            .take(span)
            .map(|u| s + h * u)
            .filter(|&b| usable(b))
            .take(per_case)
            .map(|b| (ResidueCase::EqS, b)),
    );
    if let Some(y) = family.y() {
        out.extend(
            y.elements()
                .map_while(|v| v.checked_mul(h).and_then(|p| p.checked_add(t)))
                .take_while(|&b| b <= target.hi())
                .filter(|&b| usable(b))
                .take(per_case)
                .map(|b| (ResidueCase::EqT, b)),
        );
    }
    if family.domain() == Domain::N0 {
        out.extend(
            (0..t)
                .filter(|&b| (b - t).rem_euclid(h) == 0 && usable(b))
                .take(2)
                .map(|b| (ResidueCase::EqT, b)),
        );
    }
    out
}

/// A subset `Y' ⊆ Y` given by positions in the generator's sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum YSelection {
    Empty,
    /// Indices `i` with `i ≡ residue (mod modulus)`.
    EveryNth { modulus: usize, residue: usize },
    AllExcept(Vec<usize>),
    Only(Vec<usize>),
}

impl YSelection {
    pub fn selects(&self, index: usize) -> bool {
        match self {
            YSelection::Empty => false,
            YSelection::EveryNth { modulus, residue } => index % modulus == residue % modulus,
            YSelection::AllExcept(skip) => !skip.contains(&index),
            YSelection::Only(keep) => keep.contains(&index),
        }
    }

    /// Whether `Y \ Y'` is finite.
    pub fn cofinite(&self) -> bool {
        match self {
            YSelection::AllExcept(_) => true,
            YSelection::EveryNth { modulus, .. } => *modulus == 1,
            _ => false,
        }
    }
}

impl fmt::Display for YSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        match self {
            YSelection::Empty => write!(f, "empty"),
            YSelection::EveryNth { modulus, residue } => write!(f, "every({modulus},{residue})"),
            YSelection::AllExcept(v) => write!(f, "except[{}]", list(v)),
            YSelection::Only(v) => write!(f, "only[{}]", list(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum AugmentVerdict {
    /// `missing` are the shifted images of `Y \ Y'` still outside the sumset.
    StaysNonbasis { missing: Vec<i64> },
    /// `residual` is the whole complement left on the window.
    BecomesBasisOnWindow { residual: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentReport {
    pub selection: String,
    pub verdict: AugmentVerdict,
    pub checks: Vec<Check>,
}

impl AugmentReport {
    pub fn status(&self) -> Status {
        overall(&self.checks)
    }
}

/// Adjoins `B = {h y + t : y ∈ Y'}` and checks that exactly the shifted
/// images of `Y'` join the sumset: the complement on the window stays within
/// the exceptional part plus the shifted images of `Y \ Y'`.
pub fn augment_check(family: &Family, selection: &YSelection, window: Window, budget: u64) -> Result<AugmentReport> {
    let st = setting(family, window, 0)?;
    let (h, t) = (family.h(), family.t());
    let hu = h as usize;
    let y = family.y().expect("gapped");
    let mut b_elems = Vec::new();
    let (mut kept, mut dropped) = (Vec::new(), Vec::new());
    for (index, v) in y.elements().enumerate() {
        let Some(n) = family.shifted(v) else { break };
        let Some(e) = v.checked_mul(h).and_then(|p| p.checked_add(t)) else { break };
        if e > st.source.hi() && n > st.target.hi() {
            break;
        }
        if selection.selects(index) {
            b_elems.push(e);
            if st.target.contains(n) {
                kept.push(n);
            }
        } else if st.target.contains(n) {
            dropped.push(n);
        }
    }
    let aug = st.a.union(&DenseSet::from_iter(st.source, b_elems));
    let ha = hfold_oracle(&st.a, family.domain(), hu, st.target)?.dense;
    let hab = hfold_oracle(&aug, family.domain(), hu, st.target)?.dense;
    let all_shifted = DenseSet::from_iter(st.target, st.shifted.iter().map(|&(_, n)| n));
    let exceptional = ha.complement_in().difference(&all_shifted);
    let complement = hab.complement_in().enumerate();

    let mut checks = Vec::new();
    let uncovered = subset(&kept, |n| !hab.contains(n));
    checks.push(Check::from_bool(
        "selected_covered",
        uncovered.is_empty(),
        format!("{} shifted images of Y'; still missing: {}", kept.len(), format_ranges(&uncovered)),
    ));
    let entered = subset(&dropped, |n| hab.contains(n));
    checks.push(Check::from_bool(
        "unselected_missing",
        entered.is_empty(),
        format!("{} shifted images of Y \\ Y'; now sums: {}", dropped.len(), format_ranges(&entered)),
    ));
    let dropped_set = DenseSet::from_iter(st.target, dropped.iter().copied());
    let stray = subset(&complement, |n| !exceptional.contains(n) && !dropped_set.contains(n));
    checks.push(Check::from_bool(
        "complement_within_prediction",
        stray.is_empty(),
        format!(
            "complement {{{}}} within exceptional {{{}}} and shifted Y \\ Y'; outside: {}",
            sample(&complement, 16),
            sample(&exceptional.enumerate(), 16),
            format_ranges(&stray)
        ),
    ));
    if *selection == YSelection::Empty {
        let before = ha.complement_in().enumerate();
        checks.push(Check::from_bool(
            "matches_catalog",
            before == complement,
            format!("{} outside before, {} after", before.len(), complement.len()),
        ));
    }
    let verdict = if selection.cofinite() {
        let bound = exceptional_bound(family, budget)?;
        let last_dropped = dropped.last().copied();
        let late = match bound {
            Some(b) => subset(&complement, |n| n >= b && Some(n) > last_dropped),
            None => subset(&complement, |n| !dropped_set.contains(n)),
        };
        checks.push(Check::from_bool(
            "residual_bounded",
            late.is_empty(),
            format!(
                "residual {{{}}}; beyond the exceptional bound and the last removed image: {}",
                sample(&complement, 16),
                format_ranges(&late)
            ),
        ));
        AugmentVerdict::BecomesBasisOnWindow { residual: complement }
    } else {
        AugmentVerdict::StaysNonbasis { missing: subset(&dropped, |n| !hab.contains(n)) }
    };
    Ok(AugmentReport { selection: selection.to_string(), verdict, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_gapped, Params};
    use crate::gapset::GapGenerator;
    use crate::verify::DEFAULT_BUDGET;

    fn fam(h: i64, s: i64, t: i64, domain: Domain) -> Family {
        build_gapped(Params::new(h, s, t, domain).unwrap(), GapGenerator::geometric(2, 1).unwrap()).unwrap()
    }

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn all_pass(checks: &[Check]) -> bool {
        checks.iter().all(Check::passed)
    }

    #[test]
    fn eq_s_example() {
        let f = fam(2, 0, 1, Domain::N0);
        let r = escape_check(&f, 2, w(0, 200), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residue_case, ResidueCase::EqS);
        assert!(all_pass(&r.checks), "{:?}", r.checks);
        match r.verdict {
            EscapeVerdict::BecomesBasis { exceptions, .. } => assert_eq!(exceptions, vec![5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eq_t_example() {
        let f = fam(2, 0, 1, Domain::N0);
        let r = escape_check(&f, 3, w(0, 40), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residue_case, ResidueCase::EqT);
        assert!(all_pass(&r.checks), "{:?}", r.checks);
        match r.verdict {
            EscapeVerdict::StaysNonbasis { added, .. } => {
                assert!(added.contains(&3));
                assert!(added.iter().all(|n| [3, 4, 6, 10].contains(n)), "{added:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_st_example() {
        let f = fam(3, 0, 1, Domain::N0);
        let r = escape_check(&f, 2, w(0, 300), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residue_case, ResidueCase::NotST);
        assert!(all_pass(&r.checks), "{:?}", r.checks);
        match r.verdict {
            // y = 2 gives 3y + 1 = 7, the only shifted element the condition misses
            EscapeVerdict::BecomesBasis { exceptions, .. } => assert!(exceptions.iter().all(|&n| n <= 7), "{exceptions:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_members() {
        let f = fam(2, 0, 1, Domain::N0);
        assert_eq!(escape_check(&f, 7, w(0, 40), DEFAULT_BUDGET), Err(Error::BNotOutside { b: 7 }));
        assert!(matches!(escape_check(&f, -2, w(0, 40), DEFAULT_BUDGET), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn sampled_escapes_pass() {
        for f in [fam(2, 0, 1, Domain::N0), fam(3, 2, 0, Domain::N0), fam(4, 3, 6, Domain::N0), fam(3, 1, 0, Domain::Z)] {
            let win = if f.domain() == Domain::Z { w(-300, 300) } else { w(0, 1500) };
            let points = sample_escape_points(&f, 5, win);
            assert!(points.len() >= 10, "{points:?}");
            for (case, b) in points {
                let r = escape_check(&f, b, win, DEFAULT_BUDGET).unwrap();
                assert_eq!(r.residue_case, case);
                assert!(all_pass(&r.checks), "{:?} b={b}: {:?}", f.params(), r.checks);
            }
        }
    }

    #[test]
    fn augmentation_examples() {
        let f = fam(2, 0, 1, Domain::N0);
        let win = w(0, 5000);
        let even = augment_check(&f, &YSelection::EveryNth { modulus: 2, residue: 0 }, win, DEFAULT_BUDGET).unwrap();
        assert!(all_pass(&even.checks), "{:?}", even.checks);
        match &even.verdict {
            AugmentVerdict::StaysNonbasis { missing } => assert_eq!(missing[..3], [5, 17, 65]),
            other => panic!("{other:?}"),
        }
        let cof = augment_check(&f, &YSelection::AllExcept(vec![0]), win, DEFAULT_BUDGET).unwrap();
        assert!(all_pass(&cof.checks), "{:?}", cof.checks);
        assert_eq!(cof.verdict, AugmentVerdict::BecomesBasisOnWindow { residual: vec![3, 4] });
        let empty = augment_check(&f, &YSelection::Empty, win, DEFAULT_BUDGET).unwrap();
        assert!(all_pass(&empty.checks), "{:?}", empty.checks);
    }
}
