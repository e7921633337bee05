//! The four set families `{s} ∪ {h z + t : z ∈ X}` with `X` one of Z, N0,
//! `Z \ Y` or `N0 \ Y`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gapset::GapGenerator;
use crate::intset::{DenseSet, SetSpec, Window, DEFAULT_WINDOW_CAP};

/// Parameters larger than this in absolute value are rejected so that all
/// derived quantities stay comfortably inside `i64`.
pub const PARAM_LIMIT: i64 = 1 << 40;
pub const ORDER_LIMIT: i64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Domain {
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "n0")]
    N0,
}

impl Domain {
    pub fn contains(&self, n: i64) -> bool {
        match self {
            Domain::Z => true,
            Domain::N0 => n >= 0,
        }
    }

    pub fn spec(&self) -> SetSpec {
        match self {
            Domain::Z => SetSpec::integers(),
            Domain::N0 => SetSpec::nonneg(),
        }
    }

    /// The part of `window` inside the domain.
    pub fn clip(&self, window: Window) -> Option<Window> {
        match self {
            Domain::Z => Some(window),
            Domain::N0 => window.intersect(&Window::new(0, i64::MAX).unwrap()),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Z => "z",
            Domain::N0 => "n0",
        })
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Domain::Z),
            "n0" => Ok(Domain::N0),
            other => Err(Error::InvalidParameter(format!("unknown domain {other:?}, expected z or n0"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    h: i64,
    s: i64,
    t: i64,
    domain: Domain,
}

impl Params {
    pub fn new(h: i64, s: i64, t: i64, domain: Domain) -> Result<Self> {
        if !(2..=ORDER_LIMIT).contains(&h) {
            return Err(Error::InvalidParameter(format!("h must lie in [2, {ORDER_LIMIT}], got {h}")));
        }
        if s.abs() > PARAM_LIMIT || t.abs() > PARAM_LIMIT {
            return Err(Error::InvalidParameter(format!("|s| and |t| must not exceed {PARAM_LIMIT}")));
        }
        if domain == Domain::N0 && (s < 0 || t < 0) {
            return Err(Error::DomainConstraint(format!(
                "s and t must be nonnegative over N0, got s = {s}, t = {t}"
            )));
        }
        Ok(Params { h, s, t, domain })
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn gcd_case(&self) -> GcdCase {
        gcd_case(self.h, self.s, self.t)
    }

    /// Same `h`, `s - t` and domain with both `s` and `t` moved by `c`.
    pub fn translated(&self, c: i64) -> Result<Self> {
        Params::new(self.h, self.s + c, self.t + c, self.domain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GcdKind {
    /// `gcd(h, s - t) >= 2`: every sum lies in one residue family mod `d`.
    Nonbasis,
    /// `gcd(h, s - t) = 1`.
    BasisMachinery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GcdCase {
    pub d: i64,
    pub kind: GcdKind,
}

/// `gcd(h, s - t)` with `gcd(h, 0) = h`.
pub fn gcd_case(h: i64, s: i64, t: i64) -> GcdCase {
    let d = h.gcd(&(s - t));
    let kind = if d >= 2 { GcdKind::Nonbasis } else { GcdKind::BasisMachinery };
    GcdCase { d, kind }
}

/// `X = domain \ Y` (or the whole domain when there is no `Y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XSet {
    pub domain: Domain,
    pub y: Option<GapGenerator>,
}

impl XSet {
    pub fn contains(&self, x: i64) -> bool {
        self.domain.contains(x) && !self.y.as_ref().is_some_and(|y| y.is_member(x))
    }

    pub fn in_y(&self, x: i64) -> bool {
        self.y.as_ref().is_some_and(|y| y.is_member(x))
    }

    /// Smallest nonnegative element.
    pub fn min_nonneg(&self) -> i64 {
        (0..).find(|&x| self.contains(x)).unwrap()
    }

    pub fn spec(&self) -> SetSpec {
        match &self.y {
            None => self.domain.spec(),
            Some(y) => SetSpec::diff(self.domain.spec(), SetSpec::GapTail(y.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    params: Params,
    y: Option<GapGenerator>,
    spec: SetSpec,
}

/// `A_Z = {s} ∪ {h z + t : z ∈ Z}` or `A_N0 = {s} ∪ {h z + t : z ∈ N0}`.
pub fn build_full(params: Params) -> Result<Family> {
    let progression = match params.domain {
        Domain::Z => SetSpec::mod_class(params.h, params.t)?,
        Domain::N0 => SetSpec::mod_class_nonneg(params.h, params.t)?,
    };
    Ok(Family {
        params,
        y: None,
        spec: SetSpec::union(vec![SetSpec::Singleton(params.s), progression]),
    })
}

/// `A_X = {s} ∪ {h x + t : x ∈ X}` with `X = domain \ Y`.
pub fn build_gapped(params: Params, y: GapGenerator) -> Result<Family> {
    let case = params.gcd_case();
    if case.d != 1 {
        return Err(Error::GcdViolation { h: params.h, s: params.s, t: params.t, d: case.d });
    }
    let x = XSet { domain: params.domain, y: Some(y.clone()) };
    let progression = SetSpec::shift_scale(x.spec(), params.t, params.h)?;
    Ok(Family {
        params,
        y: Some(y),
        spec: SetSpec::union(vec![SetSpec::Singleton(params.s), progression]),
    })
}

impl Family {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn h(&self) -> i64 {
        self.params.h
    }

    pub fn s(&self) -> i64 {
        self.params.s
    }

    pub fn t(&self) -> i64 {
        self.params.t
    }

    pub fn domain(&self) -> Domain {
        self.params.domain
    }

    pub fn y(&self) -> Option<&GapGenerator> {
        self.y.as_ref()
    }

    pub fn spec(&self) -> &SetSpec {
        &self.spec
    }

    pub fn is_gapped(&self) -> bool {
        self.y.is_some()
    }

    pub fn x_set(&self) -> XSet {
        XSet { domain: self.params.domain, y: self.y.clone() }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.spec.member_unchecked(n)
    }

    pub fn materialize(&self, window: Window) -> Result<DenseSet> {
        self.spec.materialize_capped(window, DEFAULT_WINDOW_CAP)
    }

    /// `(h - 1) s + h y + t`, the sum whose only representation uses the
    /// absent summand `h y + t`.
    pub fn shifted(&self, y: i64) -> Option<i64> {
        let (h, s, t) = (self.params.h as i128, self.params.s as i128, self.params.t as i128);
        i64::try_from((h - 1) * s + h * y as i128 + t).ok()
    }

    /// Pairs `(y, (h - 1) s + h y + t)` for `y ∈ Y` with the second
    /// coordinate inside `window`.
    pub fn shifted_y_in(&self, window: Window) -> Vec<(i64, i64)> {
        let Some(y) = &self.y else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for v in y.elements() {
            match self.shifted(v) {
                Some(n) if n > window.hi() => break,
                Some(n) if n >= window.lo() => out.push((v, n)),
                Some(_) => {}
                None => break,
            }
        }
        out
    }

    /// The same construction with `s` and `t` moved by `c`; its sumset is
    /// the original one moved by `h c`.
    pub fn translated(&self, c: i64) -> Result<Family> {
        let params = self.params.translated(c)?;
        match &self.y {
            None => build_full(params),
            Some(y) => build_gapped(params, y.clone()),
        }
    }
}
