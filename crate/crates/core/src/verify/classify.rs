//! Membership of single integers in `hA` through the residue decomposition.

use num_integer::Integer;
use serde::Serialize;

use super::kx::{decide_kx, KxDecision};
use crate::error::{Error, Result};
use crate::families::{Domain, Family, Params, XSet};
use crate::intset::{DenseSet, Window};
use crate::sumset;

/// Largest `|n|` accepted by `classify`.
pub const N_LIMIT: i64 = 1 << 60;

/// `n = i (s - t) + h q` with `0 <= i < h`, and `k = h - i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueDecomposition {
    pub i: i64,
    pub q: i64,
    pub k: i64,
}

fn check_n(n: i64) -> Result<()> {
    if n.unsigned_abs() > N_LIMIT as u64 {
        return Err(Error::InvalidParameter(format!("|n| must not exceed {N_LIMIT}")));
    }
    Ok(())
}

fn coprime(params: &Params) -> Result<()> {
    let case = params.gcd_case();
    if case.d != 1 {
        return Err(Error::GcdViolation { h: params.h(), s: params.s(), t: params.t(), d: case.d });
    }
    Ok(())
}

pub fn residue_decompose(params: &Params, n: i64) -> Result<ResidueDecomposition> {
    coprime(params)?;
    check_n(n)?;
    let h = params.h() as i128;
    let diff = (params.s() - params.t()) as i128;
    let inverse = diff.extended_gcd(&h).x.rem_euclid(h);
    let i = (n as i128 * inverse).rem_euclid(h);
    let q = (n as i128 - i * diff) / h;
    Ok(ResidueDecomposition { i: i as i64, q: q as i64, k: (h - i) as i64 })
}

/// The `z1` of the only representation `n = (h - 1) s + (h z1 + t)` over the
/// full family, for `n ≡ t - s (mod h)`.
pub fn unique_rep_z1(params: &Params, n: i64) -> Result<i64> {
    check_n(n)?;
    let (h, s, t) = (params.h() as i128, params.s() as i128, params.t() as i128);
    let (z1, rem) = (n as i128 - (h - 1) * s - t).div_rem(&h);
    if rem != 0 {
        return Err(Error::WrongResidue { n, h: params.h() });
    }
    Ok(z1 as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalTag {
    /// Outside the `t - s` class.
    F0,
    /// In the `t - s` class below `(h - 1) s + t`.
    F1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// `n = i s + sum(h x + t for x in xs)` with `h - i` entries in `xs`.
    InSumset { i: i64, xs: Vec<i64> },
    /// `n = (h - 1) s + h y + t` with `y ∈ Y`.
    OutShiftedY { y: i64 },
    OutExceptional { tag: ExceptionalTag },
    Unknown,
}

impl Verdict {
    pub fn is_in(&self) -> bool {
        matches!(self, Verdict::InSumset { .. })
    }

    pub fn is_out(&self) -> bool {
        matches!(self, Verdict::OutShiftedY { .. } | Verdict::OutExceptional { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::InSumset { .. } => "InSumset",
            Verdict::OutShiftedY { .. } => "OutShiftedY",
            Verdict::OutExceptional { tag: ExceptionalTag::F0 } => "OutExceptional(F0)",
            Verdict::OutExceptional { tag: ExceptionalTag::F1 } => "OutExceptional(F1)",
            Verdict::Unknown => "Unknown",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::InSumset { i, xs } => write!(f, "InSumset(i={i}, xs={xs:?})"),
            Verdict::OutShiftedY { y } => write!(f, "OutShiftedY({y})"),
            other => f.write_str(other.label()),
        }
    }
}

/// Classifies integers for one family. Over N0 the small region
/// `n < (h - 2) s + h t` is read from a brute-force sumset computed once.
#[derive(Debug, Clone)]
pub struct Classifier<'a> {
    family: &'a Family,
    x: XSet,
    budget: u64,
    low: Option<(DenseSet, DenseSet)>,
}

impl<'a> Classifier<'a> {
    pub fn new(family: &'a Family, budget: u64) -> Result<Self> {
        coprime(family.params())?;
        let mut low = None;
        if family.domain() == Domain::N0 {
            let cut = (family.h() - 2) * family.s() + family.h() * family.t();
            if cut > 0 {
                let w = Window::new(0, cut - 1)?;
                let a = family.materialize(w)?;
                let ha = sumset::hfold(&a, family.h() as usize, w)?;
                low = Some((a, ha));
            }
        }
        Ok(Classifier { family, x: family.x_set(), budget, low })
    }

    pub fn family(&self) -> &Family {
        self.family
    }

    pub fn classify(&self, n: i64) -> Result<Verdict> {
        let f = self.family;
        if !f.domain().contains(n) {
            return Err(Error::OutsideDomain { n });
        }
        let d = residue_decompose(f.params(), n)?;
        let (h, s, t) = (f.h(), f.s(), f.t());
        if d.i == h - 1 {
            let z1 = d.q - t;
            return Ok(if self.x.contains(z1) {
                Verdict::InSumset { i: d.i, xs: vec![z1] }
            } else if self.x.in_y(z1) {
                Verdict::OutShiftedY { y: z1 }
            } else {
                Verdict::OutExceptional { tag: ExceptionalTag::F1 }
            });
        }
        if let Some((a, ha)) = &self.low {
            if ha.window().contains(n) {
                return self.oracle_verdict(a, ha, n);
            }
        }
        if d.i == 0 && n as i128 == h as i128 * s as i128 {
            return Ok(Verdict::InSumset { i: h, xs: Vec::new() });
        }
        Ok(match decide_kx(&self.x, d.k as usize, d.q - t, self.budget)? {
            KxDecision::In { xs } => Verdict::InSumset { i: d.i, xs },
            KxDecision::Out => Verdict::OutExceptional { tag: ExceptionalTag::F0 },
            KxDecision::Unknown => Verdict::Unknown,
        })
    }

    fn oracle_verdict(&self, a: &DenseSet, ha: &DenseSet, n: i64) -> Result<Verdict> {
        if !ha.contains(n) {
            return Ok(Verdict::OutExceptional { tag: ExceptionalTag::F0 });
        }
        let f = self.family;
        let summands = sumset::witness(a, f.h() as usize, n)?
            .ok_or(Error::Overflow("a witness the oracle promised"))?;
        let i = summands.iter().filter(|&&v| v == f.s()).count() as i64;
        let xs = summands.iter().filter(|&&v| v != f.s()).map(|&v| (v - f.t()) / f.h()).collect();
        Ok(Verdict::InSumset { i, xs })
    }
}

pub fn classify(family: &Family, n: i64, budget: u64) -> Result<Verdict> {
    Classifier::new(family, budget)?.classify(n)
}

/// Re-checks a verdict from first principles. Exceptional verdicts are only
/// checked for their residue class; their absence from `hA` is what the
/// oracle comparisons establish.
pub fn certificate_holds(family: &Family, n: i64, verdict: &Verdict) -> bool {
    let (h, s, t) = (family.h() as i128, family.s() as i128, family.t() as i128);
    let x = family.x_set();
    let special = (n as i128 - (h - 1) * s - t).rem_euclid(h) == 0;
    match verdict {
        Verdict::InSumset { i, xs } => {
            let i = *i as i128;
            (0..=h).contains(&i)
                && xs.len() as i128 == h - i
                && xs.iter().all(|&v| x.contains(v))
                && i * s + xs.iter().map(|&v| h * v as i128 + t).sum::<i128>() == n as i128
        }
        Verdict::OutShiftedY { y } => {
            x.in_y(*y) && (h - 1) * s + h * *y as i128 + t == n as i128
        }
        Verdict::OutExceptional { tag: ExceptionalTag::F0 } => !special,
        Verdict::OutExceptional { tag: ExceptionalTag::F1 } => {
            special && family.domain() == Domain::N0 && (n as i128) < (h - 1) * s + t
        }
        Verdict::Unknown => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_full, build_gapped};
    use crate::gapset::GapGenerator;
    use crate::verify::DEFAULT_BUDGET;

    fn p(h: i64, s: i64, t: i64, domain: Domain) -> Params {
        Params::new(h, s, t, domain).unwrap()
    }

    fn geom2_family(h: i64, s: i64, t: i64, domain: Domain) -> Family {
        build_gapped(p(h, s, t, domain), GapGenerator::geometric(2, 1).unwrap()).unwrap()
    }

    #[test]
    fn residue_decompositions() {
        let d = residue_decompose(&p(3, 0, 1, Domain::N0), 5).unwrap();
        assert_eq!(d, ResidueDecomposition { i: 1, q: 2, k: 2 });
        let d = residue_decompose(&p(2, 0, 1, Domain::N0), 7).unwrap();
        assert_eq!(d, ResidueDecomposition { i: 1, q: 4, k: 1 });
        let d = residue_decompose(&p(2, 0, 1, Domain::N0), 6).unwrap();
        assert_eq!(d, ResidueDecomposition { i: 0, q: 3, k: 2 });
        assert!(matches!(
            residue_decompose(&p(2, 1, 3, Domain::Z), 4),
            Err(Error::GcdViolation { d: 2, .. })
        ));
    }

    #[test]
    fn decomposition_reassembles() {
        for (h, s, t) in [(5, 3, -4), (4, -7, 2), (6, 1, 0)] {
            for n in -40..40 {
                let d = residue_decompose(&p(h, s, t, Domain::Z), n).unwrap();
                assert!((0..h).contains(&d.i));
                assert_eq!(d.i * (s - t) + h * d.q, n);
            }
        }
    }

    #[test]
    fn unique_representation_offsets() {
        assert_eq!(unique_rep_z1(&p(2, 0, 1, Domain::N0), 7).unwrap(), 3);
        assert_eq!(unique_rep_z1(&p(3, 0, 1, Domain::N0), 7).unwrap(), 2);
        assert_eq!(unique_rep_z1(&p(2, 1, 3, Domain::Z), 10).unwrap(), 3);
        assert_eq!(unique_rep_z1(&p(3, 0, 1, Domain::N0), 6), Err(Error::WrongResidue { n: 6, h: 3 }));
    }

    #[test]
    fn classify_examples() {
        let f = geom2_family(2, 0, 1, Domain::N0);
        assert_eq!(classify(&f, 7, DEFAULT_BUDGET).unwrap(), Verdict::InSumset { i: 1, xs: vec![3] });
        assert_eq!(classify(&f, 5, DEFAULT_BUDGET).unwrap(), Verdict::OutShiftedY { y: 2 });
        assert_eq!(
            classify(&f, 4, DEFAULT_BUDGET).unwrap(),
            Verdict::OutExceptional { tag: ExceptionalTag::F0 }
        );
        assert_eq!(classify(&f, 0, DEFAULT_BUDGET).unwrap(), Verdict::InSumset { i: 2, xs: vec![] });
        assert!(matches!(classify(&f, -1, DEFAULT_BUDGET), Err(Error::OutsideDomain { n: -1 })));
    }

    #[test]
    fn below_threshold_uses_oracle() {
        let f = geom2_family(3, 4, 2, Domain::N0);
        let c = Classifier::new(&f, DEFAULT_BUDGET).unwrap();
        let w = Window::new(0, 80).unwrap();
        let ha = sumset::hfold(&f.materialize(w).unwrap(), 3, w).unwrap();
        for n in w.iter() {
            let v = c.classify(n).unwrap();
            assert!(certificate_holds(&f, n, &v), "{n}: {v:?}");
            assert_eq!(v.is_in(), ha.contains(n), "{n}: {v:?}");
        }
    }

    #[test]
    fn f1_below_the_special_class_start() {
        let f = geom2_family(2, 5, 2, Domain::N0);
        // 3 ≡ t - s (mod 2) and 3 < s + t
        assert_eq!(
            classify(&f, 3, DEFAULT_BUDGET).unwrap(),
            Verdict::OutExceptional { tag: ExceptionalTag::F1 }
        );
    }

    #[test]
    fn full_families_classify() {
        let f = build_full(p(3, 2, 0, Domain::Z)).unwrap();
        for n in -30..30 {
            let v = classify(&f, n, DEFAULT_BUDGET).unwrap();
            assert!(v.is_in() && certificate_holds(&f, n, &v), "{n}: {v:?}");
        }
    }

    #[test]
    fn forged_certificates_fail() {
        let f = geom2_family(2, 0, 1, Domain::N0);
        assert!(!certificate_holds(&f, 7, &Verdict::InSumset { i: 1, xs: vec![2] }));
        assert!(!certificate_holds(&f, 9, &Verdict::OutShiftedY { y: 3 }));
        assert!(!certificate_holds(&f, 5, &Verdict::OutExceptional { tag: ExceptionalTag::F0 }));
    }
}
