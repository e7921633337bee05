//! Integer sets: finite windows onto Z, algebraic set specifications and
//! their exact bitset materializations.

pub(crate) mod bits;
mod grammar;
mod spec;

use std::fmt;

use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use grammar::parse_spec;
pub use spec::SetSpec;

/// Largest window (in integers) that `materialize` and the sumset kernel
/// will allocate by default.
pub const DEFAULT_WINDOW_CAP: u64 = 1 << 26;

/// The closed integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn width(&self) -> u64 {
        (self.hi as i128 - self.lo as i128 + 1) as u64
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    /// Fails with `WindowTooLarge` when the width exceeds `cap`.
    pub fn check_cap(&self, cap: u64) -> Result<usize> {
        let width = self.width();
        if width > cap {
            return Err(Error::WindowTooLarge { width, cap });
        }
        Ok(width as usize)
    }

    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Window { lo, hi })
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Splits the window into consecutive pieces of at most `width` integers.
    pub fn chunks(&self, width: u64) -> Vec<Window> {
        let width = width.max(1) as i64;
        let mut out = Vec::new();
        let mut lo = self.lo;
        loop {
            let hi = lo.saturating_add(width - 1).min(self.hi);
            out.push(Window { lo, hi });
            if hi == self.hi {
                break;
            }
            lo = hi + 1;
        }
        out
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    /// Parses `LO:HI`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            offset: 0,
            message: format!("expected LO:HI, got {s:?}"),
        };
        let (lo, hi) = s.trim().split_once(':').ok_or_else(bad)?;
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        Window::new(lo, hi)
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.lo)?;
        t.serialize_element(&self.hi)?;
        t.end()
    }
}

/// Exact membership of a set restricted to a window: bit `i` is set iff
/// `window.lo() + i` belongs to the set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseSet {
    window: Window,
    words: Vec<u64>,
}

impl DenseSet {
    pub fn empty(window: Window) -> Self {
        DenseSet {
            window,
            words: vec![0; bits::words_for(window.width() as usize)],
        }
    }

    pub fn full(window: Window) -> Self {
        let len = window.width() as usize;
        let mut words = vec![u64::MAX; bits::words_for(len)];
        bits::mask_tail(&mut words, len);
        DenseSet { window, words }
    }

    /// Builds the set from arbitrary integers; values outside the window are
    /// dropped.
    pub fn from_iter<I: IntoIterator<Item = i64>>(window: Window, values: I) -> Self {
        let mut set = DenseSet::empty(window);
        for v in values {
            if window.contains(v) {
                bits::set(&mut set.words, (v - window.lo) as usize);
            }
        }
        set
    }

    pub(crate) fn from_words(window: Window, mut words: Vec<u64>) -> Self {
        let len = window.width() as usize;
        debug_assert_eq!(words.len(), bits::words_for(len));
        bits::mask_tail(&mut words, len);
        DenseSet { window, words }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub(crate) fn bit_len(&self) -> usize {
        self.window.width() as usize
    }

    pub fn contains(&self, n: i64) -> bool {
        self.window.contains(n) && bits::get(&self.words, (n - self.window.lo) as usize)
    }

    pub fn len(&self) -> usize {
        bits::count(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = self.window.lo;
        bits::ones(&self.words).map(move |i| lo + i as i64)
    }

    /// Members in ascending order.
    pub fn enumerate(&self) -> Vec<i64> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<i64> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<i64> {
        let lo = self.window.lo;
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| lo + (i * bits::WORD) as i64 + (63 - w.leading_zeros()) as i64)
    }

    /// Complement relative to the window.
    pub fn complement_in(&self) -> DenseSet {
        let words = self.words.iter().map(|w| !w).collect();
        DenseSet::from_words(self.window, words)
    }

    /// Same members, viewed through another window. Members outside the new
    /// window are dropped; positions outside the old window are empty.
    pub fn clip(&self, window: Window) -> DenseSet {
        let mut words = vec![0u64; bits::words_for(window.width() as usize)];
        bits::or_shifted(
            &mut words,
            window.width() as usize,
            &self.words,
            self.window.lo - window.lo,
        );
        DenseSet { window, words }
    }

    pub fn union(&self, other: &DenseSet) -> DenseSet {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &DenseSet) -> DenseSet {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &DenseSet) -> DenseSet {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &DenseSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Binary operations on a second set are taken after clipping it to
    /// this set's window.
    fn zip_words(&self, other: &DenseSet, op: impl Fn(u64, u64) -> u64) -> DenseSet {
        let other = if other.window == self.window {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(other.clip(self.window))
        };
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(&a, &b)| op(a, b))
            .collect();
        DenseSet::from_words(self.window, words)
    }

    /// Concatenates sets over consecutive, adjacent windows.
    pub fn concat(parts: &[DenseSet]) -> Result<DenseSet> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("concat of zero parts".into()))?;
        let mut hi = first.window.hi;
        for p in &parts[1..] {
            if p.window.lo != hi + 1 {
                return Err(Error::InvalidParameter(format!(
                    "parts are not adjacent at {hi}"
                )));
            }
            hi = p.window.hi;
        }
        let window = Window::new(first.window.lo, hi)?;
        let mut words = vec![0u64; bits::words_for(window.width() as usize)];
        for p in parts {
            bits::or_shifted(
                &mut words,
                window.width() as usize,
                &p.words,
                p.window.lo - window.lo,
            );
        }
        Ok(DenseSet { window, words })
    }
}

impl fmt::Debug for DenseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseSet[{}]", self.window)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Materializes `spec` on `window` using the default cap.
pub fn materialize(spec: &SetSpec, window: Window) -> Result<DenseSet> {
    spec.materialize_capped(window, DEFAULT_WINDOW_CAP)
}

/// Decides membership of `n` directly from the set description.
pub fn member(spec: &SetSpec, n: i64) -> Result<bool> {
    spec.member(n)
}

pub fn enumerate(dense: &DenseSet) -> Vec<i64> {
    dense.enumerate()
}

pub fn complement_in(dense: &DenseSet) -> DenseSet {
    dense.complement_in()
}
