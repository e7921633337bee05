//! Whole-family verification runs producing a `Report`.

use super::catalog::{catalog_checks, classify_window, default_z_radius, family_oracle, z_stability_check, Catalog};
use super::escape::{augment_check, escape_check, sample_escape_points, EscapeVerdict, ResidueCase, YSelection};
use super::kx::lemma_basis_check;
use super::{format_ranges, overall, sample, Check, Status};
use crate::error::{Error, Result};
use crate::families::{Domain, Family, GcdKind};
use crate::gapset::GapGenerator;
use crate::intset::Window;
use crate::report::{FamilyInfo, Report};
use crate::sumset;

/// Width of the sub-window `verify_full` checks representation counts on.
pub const UNIQUENESS_SPAN: u64 = 1024;

fn target(family: &Family, window: Window) -> Result<Window> {
    family
        .domain()
        .clip(window)
        .ok_or_else(|| Error::DomainConstraint(format!("window {window} lies outside N0")))
}

/// For `d = gcd(h, s - t) >= 2`, every sum lies in `h t + d Z` and the other
/// classes mod h are missing; for `d = 1`, everything from
/// `(h - 1) |s - t| + h t` on is a sum (all of the window over Z).
pub fn dichotomy_checks(family: &Family, window: Window) -> Result<Vec<Check>> {
    let (h, s, t) = (family.h(), family.s(), family.t());
    let case = family.params().gcd_case();
    let target = target(family, window)?;
    let oracle = family_oracle(family, target, default_z_radius(family, target))?.dense;
    let mut checks = vec![Check::pass("gcd_case", format!("d = {}, {:?}", case.d, case.kind))];
    if case.kind == GcdKind::Nonbasis {
        let d = case.d;
        let stray: Vec<i64> = oracle.iter().filter(|&n| (n - h * t).rem_euclid(d) != 0).collect();
        checks.push(Check::from_bool(
            "residue_confinement",
            stray.is_empty(),
            format!("sums outside h t + {d}Z: {}", sample(&stray, 16)),
        ));
        let mut present = vec![false; h as usize];
        let mut hit = vec![false; h as usize];
        for n in target.iter().take(h as usize) {
            present[n.rem_euclid(h) as usize] = true;
        }
        for n in oracle.iter() {
            hit[n.rem_euclid(h) as usize] = true;
        }
        let classes = present.iter().filter(|&&p| p).count() as i64;
        let missing = (0..h as usize).filter(|&r| present[r] && !hit[r]).count() as i64;
        let unreachable = (0..h).filter(|&r| present[r as usize] && (r - h * t).rem_euclid(d) != 0);
        let confined = unreachable.clone().all(|r| !hit[r as usize]);
        let ok = confined && (classes < h || missing * d >= classes * (d - 1));
        checks.push(Check::from_bool(
            "missing_residue_classes",
            ok,
            format!("{missing} of {classes} classes mod {h} have no sum on the window; {} are unreachable", unreachable.count()),
        ));
    } else {
        let threshold = match family.domain() {
            Domain::N0 => (h - 1) * (s - t).abs() + h * t,
            Domain::Z => target.lo(),
        };
        let late: Vec<i64> = oracle.complement_in().iter().filter(|&n| n >= threshold).collect();
        checks.push(Check::from_bool(
            "basis_above_threshold",
            late.is_empty(),
            format!("threshold {threshold}; non-sums at or above it: {}", sample(&late, 16)),
        ));
    }
    Ok(checks)
}

/// Every `n ≡ t - s (mod h)` of the window's safe part has exactly one
/// representation as a multiset of h elements. Over N0 the safe part starts
/// at `(h - 1) |s - t| + h t`; over Z it is the whole window.
pub fn uniqueness_check(family: &Family, window: Window) -> Result<Check> {
    let (h, s, t) = (family.h(), family.s(), family.t());
    let target = target(family, window)?;
    let start = match family.domain() {
        Domain::N0 => ((h - 1) * (s - t).abs() + h * t).max(target.lo()),
        Domain::Z => target.lo(),
    };
    if start > target.hi() {
        return Ok(Check::pass("uniqueness", format!("the safe region starts at {start}, past the window")));
    }
    let sub = Window::new(start, target.hi())?;
    let trunc = match family.domain() {
        Domain::N0 => Window::new(0, sub.hi())?,
        Domain::Z => {
            let pad = (h - 1) * s.abs() + t.abs() + h;
            Window::new((sub.lo() - pad).min(s), (sub.hi() + pad).max(s))?
        }
    };
    let a = family.materialize(trunc)?;
    let counts = sumset::representation_counts(&a, h as usize, sub)?;
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for (n, &c) in sub.iter().zip(&counts) {
        if (n - (t - s)).rem_euclid(h) == 0 {
            checked += 1;
            if c != 1 {
                bad.push(n);
            }
        }
    }
    Ok(Check::from_bool(
        "uniqueness",
        bad.is_empty(),
        format!("{checked} integers ≡ t - s (mod h) on {sub}; count != 1 at {}", sample(&bad, 16)),
    ))
}

fn full_report_checks(family: &Family, window: Window) -> Result<Vec<Check>> {
    let mut checks = dichotomy_checks(family, window)?;
    if family.params().gcd_case().kind == GcdKind::BasisMachinery {
        let target = target(family, window)?;
        let start = match family.domain() {
            Domain::N0 => ((family.h() - 1) * (family.s() - family.t()).abs() + family.h() * family.t()).max(target.lo()),
            Domain::Z => target.lo().max(-(UNIQUENESS_SPAN as i64) / 2),
        };
        let hi = target.hi().min(start.saturating_add(UNIQUENESS_SPAN as i64 - 1));
        checks.push(match Window::new(start, hi) {
            Ok(sub) => uniqueness_check(family, sub)?,
            Err(_) => Check::pass("uniqueness", format!("the safe region starts at {start}, past the window")),
        });
    }
    Ok(checks)
}

/// The full families `{s} ∪ (h Z + t)` and `{s} ∪ (h N0 + t)`.
pub fn verify_full(family: &Family, window: Window, budget: u64) -> Result<Report> {
    if family.is_gapped() {
        return Err(Error::InvalidParameter("expected a family without gaps".into()));
    }
    let checks = full_report_checks(family, window)?;
    let catalog = match family.params().gcd_case().kind {
        GcdKind::BasisMachinery => Some(Catalog::from_verdicts(&classify_window(family, window, budget)?)),
        GcdKind::Nonbasis => None,
    };
    Ok(Report { family: FamilyInfo::of(family), window, catalog, checks })
}

fn escape_summary(family: &Family, window: Window, budget: u64) -> Result<Vec<Check>> {
    let points = sample_escape_points(family, 5, window);
    let mut checks = Vec::new();
    for case in [ResidueCase::NotST, ResidueCase::EqS, ResidueCase::EqT] {
        let name = format!("escape_{case}");
        if case == ResidueCase::NotST && family.h() == 2 {
            checks.push(Check::pass(name, "vacuous for h = 2: every b is congruent to s or t"));
            continue;
        }
        let bs: Vec<i64> = points.iter().filter(|(c, _)| *c == case).map(|&(_, b)| b).collect();
        if bs.is_empty() {
            checks.push(Check::unknown(name, "no outside element of this class in the window"));
            continue;
        }
        let mut notes = Vec::new();
        let mut statuses = Vec::new();
        for &b in &bs {
            let r = match escape_check(family, b, window, budget) {
                Err(Error::BudgetExhausted { .. }) => {
                    statuses.push(Check::unknown("", ""));
                    notes.push(format!("b={b}: probe budget exhausted"));
                    continue;
                }
                r => r?,
            };
            let expected = matches!(
                (&r.verdict, case),
                (EscapeVerdict::StaysNonbasis { .. }, ResidueCase::EqT)
                    | (EscapeVerdict::BecomesBasis { .. }, ResidueCase::NotST | ResidueCase::EqS)
            );
            let status = if expected { r.status() } else { Status::Fail };
            statuses.push(Check::new("", status, ""));
            let summary = match &r.verdict {
                EscapeVerdict::BecomesBasis { threshold, exceptions } => format!(
                    "b={b}: basis, exceptions {{{}}}{}",
                    format_ranges(exceptions),
                    threshold.map_or(String::new(), |c| format!(" below {c}"))
                ),
                EscapeVerdict::StaysNonbasis { added, .. } => {
                    format!("b={b}: nonbasis, added {{{}}}", sample(added, 8))
                }
            };
            let failing: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
            notes.push(if failing.is_empty() { summary } else { format!("{summary} [{}]", failing.join(", ")) });
        }
        checks.push(Check::new(name, overall(&statuses), notes.join("; ")));
    }
    Ok(checks)
}

fn augment_summary(family: &Family, window: Window, budget: u64) -> Result<Vec<Check>> {
    let selections = [
        ("augment_empty", YSelection::Empty),
        ("augment_even_indexed", YSelection::EveryNth { modulus: 2, residue: 0 }),
        ("augment_all_but_first", YSelection::AllExcept(vec![0])),
    ];
    let mut checks = Vec::new();
    for (name, sel) in selections {
        let r = match augment_check(family, &sel, window, budget) {
            Err(Error::BudgetExhausted { .. }) => {
                checks.push(Check::unknown(name, format!("Y' = {sel}: probe budget exhausted")));
                continue;
            }
            r => r?,
        };
        let verdict = match &r.verdict {
            super::AugmentVerdict::StaysNonbasis { missing } => format!("nonbasis, still missing {}", sample(missing, 8)),
            super::AugmentVerdict::BecomesBasisOnWindow { residual } => {
                format!("basis on window, residual {{{}}}", sample(residual, 8))
            }
        };
        let expected = sel.cofinite() == matches!(r.verdict, super::AugmentVerdict::BecomesBasisOnWindow { .. });
        let failing: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        let status = if expected { r.status() } else { Status::Fail };
        let details = if failing.is_empty() { verdict } else { format!("{verdict} [{}]", failing.join(", ")) };
        checks.push(Check::new(name, status, format!("Y' = {}: {details}", r.selection)));
    }
    Ok(checks)
}

/// The gapped families `{s} ∪ {h x + t : x ∈ X}`: the complement catalog
/// against the oracle, escapes by residue class and augmentation by subsets
/// of Y.
pub fn verify_gapped(family: &Family, window: Window, budget: u64) -> Result<Report> {
    if !family.is_gapped() {
        return Err(Error::InvalidParameter("expected a family with a gap set".into()));
    }
    let verdicts = classify_window(family, window, budget)?;
    let catalog = Catalog::from_verdicts(&verdicts);
    let mut checks = vec![Check::pass("gcd_hypothesis", "gcd(h, s - t) = 1")];
    checks.extend(catalog_checks(family, window, &verdicts, &catalog, budget)?);
    if family.domain() == Domain::Z {
        let r = default_z_radius(family, window);
        checks.push(z_stability_check(family, window, &[r, 2 * r], &catalog)?);
    }
    checks.extend(escape_summary(family, window, budget)?);
    checks.extend(augment_summary(family, window, budget)?);
    Ok(Report { family: FamilyInfo::of(family), window, catalog: Some(catalog), checks })
}

/// `X = domain \ Y` as a basis of order h.
pub fn verify_lemma(y: &GapGenerator, h: i64, domain: Domain, window: Window, budget: u64) -> Result<Report> {
    if h < 2 {
        return Err(Error::InvalidParameter(format!("h must be at least 2, got {h}")));
    }
    let info = FamilyInfo::of_x(h, domain, y);
    let r = match lemma_basis_check(y, h as usize, domain, window, budget) {
        Err(Error::BudgetExhausted { budget, context }) => {
            let check = Check::unknown("lemma", format!("probe budget of {budget} exhausted while computing {context}"));
            return Ok(Report { family: info, window, catalog: None, checks: vec![check] });
        }
        r => r?,
    };
    let catalog = Catalog { shifted_y: Vec::new(), exceptional: r.oracle_complement.clone(), unknown: Vec::new() };
    Ok(Report { family: info, window, catalog: Some(catalog), checks: r.checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_full, build_gapped, Params};
    use crate::verify::DEFAULT_BUDGET;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn full(h: i64, s: i64, t: i64, d: Domain) -> Family {
        build_full(Params::new(h, s, t, d).unwrap()).unwrap()
    }

    #[test]
    fn full_families_pass() {
        for f in [
            full(2, 1, 3, Domain::Z),
            full(6, 2, 10, Domain::N0),
            full(3, 0, 1, Domain::N0),
            full(4, -3, 2, Domain::Z),
            full(5, 4, 4, Domain::Z),
        ] {
            let win = if f.domain() == Domain::Z { w(-200, 200) } else { w(0, 400) };
            let r = verify_full(&f, win, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        }
    }

    #[test]
    fn gapped_families_pass() {
        let y = GapGenerator::geometric(2, 1).unwrap();
        for (h, s, t, d, win) in [
            (2, 0, 1, Domain::N0, w(0, 2000)),
            (3, 0, 1, Domain::N0, w(0, 2000)),
            (2, 0, 1, Domain::Z, w(-300, 300)),
            (3, 2, 0, Domain::Z, w(-300, 300)),
        ] {
            let f = build_gapped(Params::new(h, s, t, d).unwrap(), y.clone()).unwrap();
            let r = verify_gapped(&f, win, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        }
    }

    #[test]
    fn lemma_report() {
        let y = GapGenerator::geometric(2, 1).unwrap();
        let r = verify_lemma(&y, 2, Domain::N0, w(0, 500), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.catalog.as_ref().unwrap().exceptional, vec![1, 2, 4]);
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    }
}
