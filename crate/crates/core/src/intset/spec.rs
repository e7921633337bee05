use num_integer::Integer;

use super::{bits, DenseSet, Window};
use crate::error::{Error, Result};
use crate::gapset::GapGenerator;

/// Algebraic description of a possibly infinite set of integers.
///
/// Build values through the associated constructors to get normalized trees
/// (flattened unions, residues reduced into `[0, m)`); `member` and
/// `materialize` reject hand-built trees that violate those invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetSpec {
    Empty,
    Singleton(i64),
    /// `{m z + r : z in Z}`, `m >= 1`, `0 <= r < m`.
    ModClass { m: i64, r: i64 },
    /// `{m z + r : z >= 0}`, `m >= 1`.
    ModClassNonneg { m: i64, r: i64 },
    GapTail(GapGenerator),
    Union(Vec<SetSpec>),
    Diff(Box<SetSpec>, Box<SetSpec>),
    /// `d * inner + c`, `d != 0`.
    ShiftScale { inner: Box<SetSpec>, c: i64, d: i64 },
}

impl SetSpec {
    /// All of Z.
    pub fn integers() -> Self {
        SetSpec::ModClass { m: 1, r: 0 }
    }

    /// All of N0.
    pub fn nonneg() -> Self {
        SetSpec::ModClassNonneg { m: 1, r: 0 }
    }

    pub fn mod_class(m: i64, r: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::MalformedSpec(format!("modulus must be >= 1, got {m}")));
        }
        Ok(SetSpec::ModClass { m, r: r.rem_euclid(m) })
    }

    pub fn mod_class_nonneg(m: i64, r: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::MalformedSpec(format!("modulus must be >= 1, got {m}")));
        }
        Ok(SetSpec::ModClassNonneg { m, r })
    }

    /// Union with nested unions flattened and empty members dropped.
    pub fn union(parts: Vec<SetSpec>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                SetSpec::Union(inner) => flat.extend(inner),
                SetSpec::Empty => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => SetSpec::Empty,
            1 => flat.pop().unwrap(),
            _ => SetSpec::Union(flat),
        }
    }

    pub fn diff(a: SetSpec, b: SetSpec) -> Self {
        SetSpec::Diff(Box::new(a), Box::new(b))
    }

    pub fn shift_scale(inner: SetSpec, c: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::MalformedSpec("dilation by 0 is not allowed".into()));
        }
        Ok(SetSpec::ShiftScale { inner: Box::new(inner), c, d })
    }

    /// Checks the structural invariants of the tree.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::ModClass { m, r } => {
                if *m < 1 || !(0..*m).contains(r) {
                    return Err(Error::MalformedSpec(format!("mod({m},{r}) is not normalized")));
                }
            }
            SetSpec::ModClassNonneg { m, .. } if *m < 1 => {
                return Err(Error::MalformedSpec(format!("modulus must be >= 1, got {m}")));
            }
            SetSpec::Union(parts) => {
                for p in parts {
                    p.validate()?;
                }
            }
            SetSpec::Diff(a, b) => {
                a.validate()?;
                b.validate()?;
            }
            SetSpec::ShiftScale { inner, d, .. } => {
                if *d == 0 {
                    return Err(Error::MalformedSpec("dilation by 0 is not allowed".into()));
                }
                inner.validate()?;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn member(&self, n: i64) -> Result<bool> {
        self.validate()?;
        Ok(self.member_unchecked(n))
    }

    pub(crate) fn member_unchecked(&self, n: i64) -> bool {
        match self {
            SetSpec::Empty => false,
            SetSpec::Singleton(a) => *a == n,
            SetSpec::ModClass { m, r } => (n as i128 - *r as i128).rem_euclid(*m as i128) == 0,
            SetSpec::ModClassNonneg { m, r } => {
                n >= *r && (n as i128 - *r as i128).rem_euclid(*m as i128) == 0
            }
            SetSpec::GapTail(g) => g.is_member(n),
            SetSpec::Union(parts) => parts.iter().any(|p| p.member_unchecked(n)),
            SetSpec::Diff(a, b) => a.member_unchecked(n) && !b.member_unchecked(n),
            SetSpec::ShiftScale { inner, c, d } => {
                let (q, rem) = (n as i128 - *c as i128).div_rem(&(*d as i128));
                rem == 0 && i64::try_from(q).is_ok_and(|x| inner.member_unchecked(x))
            }
        }
    }

    pub fn materialize_capped(&self, window: Window, cap: u64) -> Result<DenseSet> {
        window.check_cap(cap)?;
        self.validate()?;
        Ok(self.fill(window))
    }

    fn fill(&self, window: Window) -> DenseSet {
        let (lo, hi) = (window.lo(), window.hi());
        match self {
            SetSpec::Empty => DenseSet::empty(window),
            SetSpec::Singleton(a) => DenseSet::from_iter(window, [*a]),
            SetSpec::ModClass { m, r } => {
                let first = lo as i128 + (*r as i128 - lo as i128).rem_euclid(*m as i128);
                progression(window, first, *m)
            }
            SetSpec::ModClassNonneg { m, r } => {
                let first = lo as i128 + (*r as i128 - lo as i128).rem_euclid(*m as i128);
                progression(window, first.max(*r as i128), *m)
            }
            SetSpec::GapTail(g) => DenseSet::from_iter(window, g.elements_in(window)),
            SetSpec::Union(parts) => parts
                .iter()
                .fold(DenseSet::empty(window), |acc, p| acc.union(&p.fill(window))),
            SetSpec::Diff(a, b) => a.fill(window).difference(&b.fill(window)),
            SetSpec::ShiftScale { inner, c, d } => {
                let (c, d) = (*c as i128, *d as i128);
                let (a, b) = ((lo as i128 - c), (hi as i128 - c));
                let (xlo, xhi) = if d > 0 {
                    (Integer::div_ceil(&a, &d), Integer::div_floor(&b, &d))
                } else {
                    (Integer::div_ceil(&b, &d), Integer::div_floor(&a, &d))
                };
                let xlo = xlo.max(i64::MIN as i128) as i64;
                let xhi = xhi.min(i64::MAX as i128) as i64;
                let Ok(pre) = Window::new(xlo, xhi) else {
                    return DenseSet::empty(window);
                };
                let src = inner.fill(pre);
                DenseSet::from_iter(window, src.iter().map(|x| (d * x as i128 + c) as i64))
            }
        }
    }
}

fn progression(window: Window, first: i128, step: i64) -> DenseSet {
    let len = window.width() as usize;
    let mut words = vec![0u64; bits::words_for(len)];
    let start = first - window.lo() as i128;
    if start >= 0 && (start as usize) < len {
        for i in (start as usize..len).step_by(step as usize) {
            bits::set(&mut words, i);
        }
    }
    DenseSet::from_words(window, words)
}
