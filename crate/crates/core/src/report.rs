//! Reports shared by the library and the command line.

use std::fmt::Write as _;

use serde::Serialize;

use crate::families::{Domain, Family};
use crate::gapset::GapGenerator;
use crate::intset::Window;
use crate::verify::{format_ranges, overall, Catalog, Check, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInfo {
    pub h: i64,
    pub s: Option<i64>,
    pub t: Option<i64>,
    pub domain: Domain,
    pub gap: Option<String>,
    pub spec: String,
}

impl FamilyInfo {
    pub fn of(family: &Family) -> Self {
        FamilyInfo {
            h: family.h(),
            s: Some(family.s()),
            t: Some(family.t()),
            domain: family.domain(),
            gap: family.y().map(GapGenerator::to_string),
            spec: family.spec().to_string(),
        }
    }

    /// The set `X = domain \ Y` on its own, as in the gap-basis checks.
    pub fn of_x(h: i64, domain: Domain, y: &GapGenerator) -> Self {
        let x = crate::families::XSet { domain, y: Some(y.clone()) };
        FamilyInfo { h, s: None, t: None, domain, gap: Some(y.to_string()), spec: x.spec().to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub family: FamilyInfo,
    pub window: Window,
    pub catalog: Option<Catalog>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn status(&self) -> Status {
        let unknowns = self.catalog.as_ref().is_some_and(|c| !c.unknown.is_empty());
        match overall(&self.checks) {
            Status::Pass if unknowns => Status::Unknown,
            s => s,
        }
    }

    /// 0 when everything passed, 1 on a failed check, 3 when something was
    /// left undecided.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let f = &self.family;
        let mut out = String::new();
        let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "family       h={} s={} t={} domain={} gap={}",
            f.h,
            opt(f.s),
            opt(f.t),
            f.domain,
            f.gap.as_deref().unwrap_or("none")
        );
        let _ = writeln!(out, "spec         {}", f.spec);
        let _ = writeln!(out, "window       {}", self.window);
        if let Some(c) = &self.catalog {
            let _ = writeln!(out, "shifted_y    [{}] {}", c.shifted_y.len(), format_ranges(&c.shifted_y));
            let _ = writeln!(out, "exceptional  [{}] {}", c.exceptional.len(), format_ranges(&c.exceptional));
            let _ = writeln!(out, "unknown      [{}] {}", c.unknown.len(), format_ranges(&c.unknown));
        }
        for check in &self.checks {
            let tag = match check.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Unknown => "unknown",
            };
            let _ = writeln!(out, "[{tag}] {}: {}", check.name, check.details);
        }
        out
    }
}
