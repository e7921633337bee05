//! k-fold sums of `X = Z \ Y` and `X = N0 \ Y`.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use super::{format_ranges, sample, Check};
use crate::error::{Error, Result};
use crate::families::{Domain, XSet};
use crate::gapset::GapGenerator;
use crate::intset::{DenseSet, Window};
use crate::sumset;

/// Membership probes allowed per decision unless overridden.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum KxDecision {
    /// A sorted witness `x_1 <= ... <= x_k`.
    In { xs: Vec<i64> },
    Out,
    Unknown,
}

enum Step {
    Found(Vec<i64>),
    Absent,
    Exhausted,
}

struct Search<'a> {
    x: &'a XSet,
    left: u64,
    absent: HashSet<(usize, i64)>,
}

impl Search<'_> {
    fn nonneg(&self) -> bool {
        self.x.domain == Domain::N0
    }

    fn probe(&mut self, v: i64) -> Option<bool> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        Some(self.x.contains(v))
    }

    fn run(&mut self, k: usize, m: i64) -> Step {
        if self.nonneg() && m < 0 {
            return Step::Absent;
        }
        match k {
            1 => match self.probe(m) {
                None => Step::Exhausted,
                Some(true) => Step::Found(vec![m]),
                Some(false) => Step::Absent,
            },
            2 => self.pairs(m),
            _ => self.reduce(k, m),
        }
    }

    /// Pairs `(x, m - x)` with `x <= m / 2`, from the middle outwards. The
    /// first two probes are the decompositions `u + u, (u - 1) + (u + 1)`
    /// (or `u + (u + 1), (u - 1) + (u + 2)`).
    fn pairs(&mut self, m: i64) -> Step {
        let mut x = Integer::div_floor(&m, &2);
        loop {
            if self.nonneg() && x < 0 {
                return Step::Absent;
            }
            match self.probe(x) {
                None => return Step::Exhausted,
                Some(true) => match self.probe(m - x) {
                    None => return Step::Exhausted,
                    Some(true) => return Step::Found(vec![x, m - x]),
                    Some(false) => {}
                },
                Some(false) => {}
            }
            x -= 1;
        }
    }

    /// Peel off one summand, smallest candidates first.
    fn reduce(&mut self, k: usize, m: i64) -> Step {
        if self.nonneg() {
            if self.absent.contains(&(k, m)) {
                return Step::Absent;
            }
            // the smallest of k summands is at most m / k
            for x in 0..=m / k as i64 {
                match self.probe(x) {
                    None => return Step::Exhausted,
                    Some(false) => continue,
                    Some(true) => {}
                }
                match self.run(k - 1, m - x) {
                    Step::Found(mut xs) => {
                        xs.push(x);
                        return Step::Found(xs);
                    }
                    Step::Absent => {}
                    Step::Exhausted => return Step::Exhausted,
                }
            }
            self.absent.insert((k, m));
            return Step::Absent;
        }
        // 0, 1, -1, 2, -2, ...
        for j in 0i64.. {
            let x = if j % 2 == 1 { j / 2 + 1 } else { -(j / 2) };
            match self.probe(x) {
                None => return Step::Exhausted,
                Some(false) => continue,
                Some(true) => {}
            }
            match self.run(k - 1, m - x) {
                Step::Found(mut xs) => {
                    xs.push(x);
                    return Step::Found(xs);
                }
                Step::Absent => {}
                Step::Exhausted => return Step::Exhausted,
            }
        }
        unreachable!()
    }
}

/// Whether `m` is a sum of `k` elements of `x`, spending at most `budget`
/// membership probes. `Out` is only returned after an exhaustive search,
/// which is finite over N0; over Z (with `Y` bounded below) every integer is
/// a sum of two or more elements and the search ends with `In`.
pub fn decide_kx(x: &XSet, k: usize, m: i64, budget: u64) -> Result<KxDecision> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of summands must be at least 1".into()));
    }
    if m.unsigned_abs() > 1 << 62 {
        return Err(Error::Overflow("a k-fold decomposition"));
    }
    let mut search = Search { x, left: budget, absent: HashSet::new() };
    Ok(match search.run(k, m) {
        Step::Found(mut xs) => {
            xs.sort_unstable();
            KxDecision::In { xs }
        }
        Step::Absent => KxDecision::Out,
        Step::Exhausted => KxDecision::Unknown,
    })
}

pub(crate) fn kx_certificate_holds(x: &XSet, k: usize, m: i64, xs: &[i64]) -> bool {
    xs.len() == k
        && xs.iter().all(|&v| x.contains(v))
        && xs.iter().map(|&v| v as i128).sum::<i128>() == m as i128
}

/// Integers `u` for which at least two of `u - 1, u, u + 1, u + 2` are
/// missing from X (over N0, `-1` counts as missing). Outside this set both
/// `2u` and `2u + 1` lie in `2X`.
pub fn bad_u(y: &GapGenerator, domain: Domain) -> Result<Vec<i64>> {
    let radius = y.gap_radius(3)?;
    let mut missing: Vec<i64> = y.elements().take_while(|&v| v <= radius).collect();
    if domain == Domain::N0 {
        missing.insert(0, -1);
    }
    let mut bad = Vec::new();
    for (j, &b) in missing.iter().enumerate() {
        for &a in missing[..j].iter().rev() {
            if b - a > 3 {
                break;
            }
            bad.extend(b - 2..=a + 1);
        }
    }
    if domain == Domain::N0 {
        bad.retain(|&u| u >= 0);
    }
    bad.sort_unstable();
    bad.dedup();
    Ok(bad)
}

/// Every `m` at or above this value lies in `2X`.
pub fn two_fold_threshold(y: &GapGenerator, domain: Domain) -> Result<i64> {
    Ok(bad_u(y, domain)?.last().map_or(0, |&u| 2 * u + 2))
}

/// Every `m` at or above this value lies in `kX` (`k >= 2`): once
/// `m - (k - 2) x0` clears the two-fold threshold, with `x0` the least
/// nonnegative element of X.
pub fn kx_threshold(x: &XSet, k: usize) -> Result<i64> {
    if k < 2 {
        return Err(Error::InvalidParameter("kx_threshold needs k >= 2".into()));
    }
    let Some(y) = &x.y else {
        return Ok(0);
    };
    let t2 = two_fold_threshold(y, x.domain)?;
    (k as i64 - 2)
        .checked_mul(x.min_nonneg())
        .and_then(|v| v.checked_add(t2))
        .ok_or(Error::Overflow("the k-fold threshold"))
}

/// The integers outside `kX`. Over N0 this is computed exhaustively below
/// the threshold; over Z it is empty.
pub fn kx_complement(x: &XSet, k: usize, budget: u64) -> Result<Vec<i64>> {
    if x.domain == Domain::Z || x.y.is_none() {
        return Ok(Vec::new());
    }
    let threshold = kx_threshold(x, k)?;
    let mut out = Vec::new();
    for m in 0..threshold {
        match decide_kx(x, k, m, budget)? {
            KxDecision::In { .. } => {}
            KxDecision::Out => out.push(m),
            KxDecision::Unknown => {
                return Err(Error::BudgetExhausted { budget, context: "computing a k-fold complement" })
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub bad_u: Vec<i64>,
    pub threshold: i64,
    pub predicted_complement: Vec<i64>,
    pub oracle_complement: Vec<i64>,
    pub checks: Vec<Check>,
}

/// `hX` against the brute-force oracle on a window: the bad-u set, the
/// threshold it implies and the exact finite complement.
pub fn lemma_basis_check(
    y: &GapGenerator,
    h: usize,
    domain: Domain,
    window: Window,
    budget: u64,
) -> Result<LemmaReport> {
    if h < 2 {
        return Err(Error::InvalidParameter(format!("h must be at least 2, got {h}")));
    }
    let target = domain
        .clip(window)
        .ok_or_else(|| Error::DomainConstraint(format!("window {window} lies outside N0")))?;
    let x = XSet { domain, y: Some(y.clone()) };
    let bad = bad_u(y, domain)?;
    let threshold = kx_threshold(&x, h)?;
    let predicted: Vec<i64> =
        kx_complement(&x, h, budget)?.into_iter().filter(|&m| target.contains(m)).collect();

    let source = match domain {
        Domain::N0 => Window::new(0, target.hi())?,
        Domain::Z => {
            let r = 2 * target.lo().unsigned_abs().max(target.hi().unsigned_abs()) as i64 + 64;
            Window::new(-r, r)?
        }
    };
    let xs = x.spec().materialize_capped(source, crate::intset::DEFAULT_WINDOW_CAP)?;
    let oracle = sumset::hfold(&xs, h, target)?;
    let oracle_complement = oracle.complement_in().enumerate();

    let mut checks = vec![Check::pass(
        "bad_u_finite",
        format!("bad u = {{{}}}, close pairs within 3 end by {}", format_ranges(&bad), y.gap_radius(3)?),
    )];
    if h == 2 {
        let candidates = DenseSet::from_iter(target, bad.iter().flat_map(|&u| [2 * u, 2 * u + 1]));
        let outside: Vec<i64> =
            oracle_complement.iter().copied().filter(|&m| !candidates.contains(m)).collect();
        checks.push(Check::from_bool(
            "complement_within_bad_u",
            outside.is_empty(),
            format!("complement outside {{2u, 2u + 1 : u bad}}: {}", format_ranges(&outside)),
        ));
    }
    checks.push(Check::from_bool(
        "complement_matches_prediction",
        predicted == oracle_complement,
        format!(
            "predicted {{{}}}, oracle {{{}}}",
            format_ranges(&predicted),
            sample(&oracle_complement, 32)
        ),
    ));
    let late: Vec<i64> = oracle_complement.iter().copied().filter(|&m| m >= threshold).collect();
    checks.push(Check::from_bool(
        "covered_above_threshold",
        late.is_empty(),
        format!("threshold {threshold}; uncovered at or above it: {}", sample(&late, 16)),
    ));

    let (mut disagree, mut unknown) = (Vec::new(), 0usize);
    for m in target.iter() {
        match decide_kx(&x, h, m, budget)? {
            KxDecision::In { xs } => {
                if !kx_certificate_holds(&x, h, m, &xs) || !oracle.contains(m) {
                    disagree.push(m);
                }
            }
            KxDecision::Out => {
                if oracle.contains(m) {
                    disagree.push(m);
                }
            }
            KxDecision::Unknown => unknown += 1,
        }
    }
    checks.push(if !disagree.is_empty() {
        Check::fail("decisions_match_oracle", format!("disagreements at {}", sample(&disagree, 16)))
    } else if unknown > 0 {
        Check::unknown("decisions_match_oracle", format!("{unknown} undecided within budget"))
    } else {
        Check::pass("decisions_match_oracle", format!("{} integers decided", target.width()))
    });

    Ok(LemmaReport { bad_u: bad, threshold, predicted_complement: predicted, oracle_complement, checks })
}
