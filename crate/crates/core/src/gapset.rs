//! Infinite sets of nonnegative integers with infinite gaps.
//!
//! Every generator is strictly increasing and its consecutive gaps are
//! eventually nondecreasing and unbounded, so for each distance `C` the
//! closed form yields a radius beyond which no two elements are within `C`
//! of each other.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::intset::Window;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GapGenerator {
    /// `scale * base^i` for `i >= 0`.
    Geometric { base: i64, scale: i64 },
    /// `i (i + 1) / 2` for `i >= 0`: 0, 1, 3, 6, 10, ...
    Triangular,
    /// `i!` for `i >= 1`: 1, 2, 6, 24, ...
    Factorial,
    /// A finite sorted prefix followed by the elements of `tail` that exceed
    /// the prefix maximum.
    Custom { prefix: Vec<i64>, tail: Box<GapGenerator> },
}

impl GapGenerator {
    pub fn geometric(base: i64, scale: i64) -> Result<Self> {
        if base < 2 || scale < 1 {
            return Err(Error::InvalidParameter(format!(
                "geometric generator needs base >= 2 and scale >= 1, got {base}, {scale}"
            )));
        }
        Ok(GapGenerator::Geometric { base, scale })
    }

    pub fn custom(prefix: Vec<i64>, tail: GapGenerator) -> Result<Self> {
        if matches!(tail, GapGenerator::Custom { .. }) {
            return Err(Error::InvalidParameter(
                "custom tail must be a geometric, triangular or factorial family".into(),
            ));
        }
        if prefix.first().is_some_and(|&p| p < 0) {
            return Err(Error::InvalidParameter("custom prefix must be nonnegative".into()));
        }
        if prefix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("custom prefix must be strictly increasing".into()));
        }
        Ok(GapGenerator::Custom { prefix, tail: Box::new(tail) })
    }

    /// All elements in increasing order, stopping before `i64` overflow.
    pub fn elements(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        match self {
            GapGenerator::Geometric { base, scale } => {
                let base = *base;
                Box::new(std::iter::successors(Some(*scale), move |y| y.checked_mul(base)))
            }
            GapGenerator::Triangular => {
                Box::new((0i64..).map_while(|i| i.checked_mul(i + 1).map(|v| v / 2)))
            }
            GapGenerator::Factorial => Box::new(
                std::iter::successors(Some((1i64, 1i64)), |&(i, f)| {
                    f.checked_mul(i + 1).map(|g| (i + 1, g))
                })
                .map(|(_, f)| f),
            ),
            GapGenerator::Custom { prefix, tail } => {
                let max = prefix.last().copied().unwrap_or(-1);
                Box::new(prefix.iter().copied().chain(tail.elements().skip_while(move |&y| y <= max)))
            }
        }
    }

    /// The `i`-th element (0-based, ascending).
    pub fn nth(&self, i: usize) -> Option<i64> {
        self.elements().nth(i)
    }

    pub fn index_of(&self, n: i64) -> Option<usize> {
        for (idx, y) in self.elements().enumerate() {
            if y == n {
                return Some(idx);
            }
            if y > n {
                return None;
            }
        }
        None
    }

    pub fn is_member(&self, n: i64) -> bool {
        if n < 0 {
            return false;
        }
        match self {
            GapGenerator::Triangular => {
                let d = 8 * n as u128 + 1;
                let r = d.isqrt();
                r * r == d
            }
            GapGenerator::Custom { prefix, tail } => match prefix.last() {
                Some(&max) if n <= max => prefix.binary_search(&n).is_ok(),
                _ => tail.is_member(n),
            },
            _ => self.elements().take_while(|&y| y <= n).any(|y| y == n),
        }
    }

    pub fn elements_in(&self, window: Window) -> Vec<i64> {
        self.elements()
            .skip_while(|&y| y < window.lo())
            .take_while(|&y| y <= window.hi())
            .collect()
    }

    /// Every unordered pair `y < y' <= hi` with `y' - y <= c`.
    pub fn close_pairs(&self, c: u64, hi: i64) -> Vec<(i64, i64)> {
        // pairs never extend past the radius; fall back to `hi` if the radius
        // itself is not representable
        let limit = match self.gap_radius(c) {
            Ok(r) => r.min(hi),
            Err(_) => hi,
        };
        let elems: Vec<i64> = self.elements().take_while(|&y| y <= limit).collect();
        let mut pairs = Vec::new();
        for (j, &b) in elems.iter().enumerate() {
            for &a in elems[..j].iter().rev() {
                if (b - a) as u64 > c {
                    break;
                }
                pairs.push((a, b));
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// A radius `R` such that every pair of distinct elements within
    /// distance `c` of each other lies in `[0, R]`, derived from the closed
    /// form of the gaps. For families with nondecreasing gaps this is the
    /// element at which the gap first exceeds `c`.
    pub fn gap_radius(&self, c: u64) -> Result<i64> {
        let overflow = || Error::UncertifiableTail {
            c,
            reason: "radius exceeds the 64-bit range".into(),
        };
        let c = c as i128;
        match self {
            GapGenerator::Geometric { base, scale } => {
                let (base, mut y) = (*base as i128, *scale as i128);
                while y * (base - 1) <= c {
                    y *= base;
                    if y > i64::MAX as i128 {
                        return Err(overflow());
                    }
                }
                Ok(y as i64)
            }
            GapGenerator::Triangular => {
                // gap from y_i to y_{i+1} is i + 1, first exceeds c at i = c
                let r = c.checked_mul(c + 1).ok_or_else(overflow)? / 2;
                i64::try_from(r).map_err(|_| overflow())
            }
            GapGenerator::Factorial => {
                let (mut i, mut f) = (1i128, 1i128);
                while i * f <= c {
                    f *= i + 1;
                    i += 1;
                    if f > i64::MAX as i128 {
                        return Err(overflow());
                    }
                }
                Ok(f as i64)
            }
            GapGenerator::Custom { prefix, tail } => {
                let tail_radius = tail.gap_radius(c as u64)?;
                let bound = prefix.last().copied().unwrap_or(0).max(tail_radius);
                // Past the first element beyond `bound` only tail elements with
                // gaps > c remain, so the finite prefix up to it settles R.
                let mut elems = Vec::new();
                for y in self.elements() {
                    elems.push(y);
                    if y > bound {
                        break;
                    }
                }
                if elems.last().is_none_or(|&y| y <= bound) {
                    return Err(overflow());
                }
                let last_close = elems
                    .windows(2)
                    .filter(|w| (w[1] - w[0]) as i128 <= c)
                    .map(|w| w[1])
                    .max();
                Ok(last_close.unwrap_or(elems[0]))
            }
        }
    }
}

impl fmt::Display for GapGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapGenerator::Geometric { base, scale } => write!(f, "geometric,{base},{scale}"),
            GapGenerator::Triangular => write!(f, "triangular"),
            GapGenerator::Factorial => write!(f, "factorial"),
            GapGenerator::Custom { prefix, tail } => {
                let items: Vec<String> = prefix.iter().map(i64::to_string).collect();
                write!(f, "custom,[{}],tail={tail}", items.join(","))
            }
        }
    }
}

impl FromStr for GapGenerator {
    type Err = Error;

    /// Parses the generator literal body, e.g. `geometric,2,1`,
    /// `triangular`, `factorial` or `custom,[0,5],tail=factorial`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |message: String| Error::Parse { offset: 0, message };
        let s = s.trim();
        let (head, rest) = match s.split_once(',') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s, None),
        };
        match (head, rest) {
            ("geometric", Some(rest)) => {
                let nums: Vec<&str> = rest.split(',').map(str::trim).collect();
                let [base, scale] = nums[..] else {
                    return Err(err(format!("geometric needs BASE,SCALE, got {rest:?}")));
                };
                let base = base.parse().map_err(|_| err(format!("bad base {base:?}")))?;
                let scale = scale.parse().map_err(|_| err(format!("bad scale {scale:?}")))?;
                GapGenerator::geometric(base, scale)
            }
            ("triangular", None) => Ok(GapGenerator::Triangular),
            ("factorial", None) => Ok(GapGenerator::Factorial),
            ("custom", Some(rest)) => {
                let rest = rest
                    .strip_prefix('[')
                    .ok_or_else(|| err("custom prefix must start with '['".into()))?;
                let (list, after) = rest
                    .split_once(']')
                    .ok_or_else(|| err("unterminated custom prefix".into()))?;
                let prefix = list
                    .split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<i64>().map_err(|_| err(format!("bad prefix element {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                let tail = after
                    .trim()
                    .strip_prefix(',')
                    .map(str::trim)
                    .and_then(|a| a.strip_prefix("tail="))
                    .ok_or_else(|| err("custom generator needs ',tail=FAMILY'".into()))?;
                GapGenerator::custom(prefix, tail.parse()?)
            }
            _ => Err(err(format!("unknown gap generator {s:?}"))),
        }
    }
}
