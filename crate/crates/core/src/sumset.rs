//! Brute-force h-fold sumsets on windows.
//!
//! The kernel is shift-OR over word bitsets: `S + A = ∪_{a ∈ A} (S << a)`.
//! `A` is first split into runs `{p, p + g, ..., p + (L - 1) g}` for the
//! stride `g` that yields the fewest runs, and each run is applied with
//! `log2 L` doubling shifts, so co-sparse sets and long progressions cost
//! about as much as a handful of singletons. For large `h` with many runs
//! the h-fold sum is assembled by repeated doubling `S_{2k} = S_k + S_k`
//! instead of `h - 1` single folds.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intset::bits;
use crate::intset::{DenseSet, Window, DEFAULT_WINDOW_CAP};

/// Strides tried when decomposing a shift set into progressions.
const MAX_STRIDE: i64 = 16;

/// `hfold` switches to repeated doubling above this many runs (and h >= 4).
pub const DOUBLING_RUN_THRESHOLD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exactness {
    Exact,
    SoundLowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetResult {
    pub h: usize,
    pub source: Window,
    pub target: Window,
    pub dense: DenseSet,
    pub exactness: Exactness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Iterated,
    Doubling,
}

/// Maximal progressions of a set for one stride.
struct Runs {
    stride: i64,
    /// `(first element, length)`
    runs: Vec<(i64, usize)>,
}

fn run_count(set: &DenseSet, g: i64) -> usize {
    let len = set.bit_len();
    if g as usize >= len {
        return set.len();
    }
    let mut down = vec![0u64; set.words().len()];
    bits::or_shifted(&mut down, len, set.words(), -g);
    let continued: usize = set
        .words()
        .iter()
        .zip(&down)
        .map(|(a, b)| (a & b).count_ones() as usize)
        .sum();
    set.len() - continued
}

fn decompose(set: &DenseSet) -> Runs {
    let (stride, _) = (1..=MAX_STRIDE)
        .map(|g| (g, run_count(set, g)))
        .min_by_key(|&(g, c)| (c, g))
        .unwrap();
    let mut runs = Vec::new();
    for a in set.iter() {
        if set.contains(a - stride) {
            continue;
        }
        let mut len = 1;
        while set.contains(a + stride * len as i64) {
            len += 1;
        }
        runs.push((a, len));
    }
    Runs { stride, runs }
}

/// `(S + A) ∩ target`, with `A` given by its runs.
fn add_runs(s: &DenseSet, a: &Runs, target: Window) -> DenseSet {
    let out_len = target.width() as usize;
    let mut out = vec![0u64; bits::words_for(out_len)];
    let (slo, shi) = (s.window().lo() as i128, s.window().hi() as i128);
    let (tlo, thi) = (target.lo() as i128, target.hi() as i128);
    let g = a.stride as i128;
    let mut scratch = Vec::new();
    for &(p, len) in &a.runs {
        let p = p as i128;
        let span = (len as i128 - 1) * g;
        if slo + p > thi || shi + p + span < tlo {
            continue;
        }
        let offset = (slo + p - tlo) as i64;
        if len == 1 {
            bits::or_shifted(&mut out, out_len, s.words(), offset);
            continue;
        }
        // D = S + {0, g, ..., (len - 1) g}, truncated where it can no longer
        // reach the target
        let d_len = ((s.bit_len() as i128 + span).min(thi - p - slo + 1)) as usize;
        scratch.clear();
        scratch.resize(bits::words_for(d_len), 0);
        bits::or_shifted(&mut scratch, d_len, s.words(), 0);
        let mut covered = 1usize;
        while covered < len {
            let step = covered.min(len - covered);
            bits::or_shift_up_in_place(&mut scratch, d_len, step * a.stride as usize);
            covered += step;
        }
        bits::or_shifted(&mut out, out_len, &scratch, offset);
    }
    DenseSet::from_words(target, out)
}

/// `(A + B) ∩ target`.
pub fn sumset(a: &DenseSet, b: &DenseSet, target: Window) -> Result<DenseSet> {
    target.check_cap(DEFAULT_WINDOW_CAP)?;
    if a.is_empty() || b.is_empty() {
        return Ok(DenseSet::empty(target));
    }
    let ra = decompose(a);
    let rb = decompose(b);
    Ok(if rb.runs.len() <= ra.runs.len() {
        add_runs(a, &rb, target)
    } else {
        add_runs(b, &ra, target)
    })
}

/// Window that a partial sum of `j` of the `h` summands must lie in to
/// contribute to `target`, given summands in `[min, max]`.
fn partial_window(j: usize, h: usize, min: i64, max: i64, target: Window) -> Option<Window> {
    let (j, rest) = (j as i128, (h - j) as i128);
    let lo = (j * min as i128).max(target.lo() as i128 - rest * max as i128);
    let hi = (j * max as i128).min(target.hi() as i128 - rest * min as i128);
    if lo > hi || lo < i64::MIN as i128 || hi > i64::MAX as i128 {
        return None;
    }
    Window::new(lo as i64, hi as i64).ok()
}

/// `(hA) ∩ target` for the finite set `A` exactly as given.
pub fn hfold(a: &DenseSet, h: usize, target: Window) -> Result<DenseSet> {
    hfold_with(a, h, target, Strategy::Auto)
}

pub fn hfold_with(a: &DenseSet, h: usize, target: Window, strategy: Strategy) -> Result<DenseSet> {
    if h == 0 {
        return Err(Error::InvalidParameter("sumset order must be at least 1".into()));
    }
    target.check_cap(DEFAULT_WINDOW_CAP)?;
    let (Some(min), Some(max)) = (a.min(), a.max()) else {
        return Ok(DenseSet::empty(target));
    };
    let Some(w1) = partial_window(1, h, min, max, target) else {
        return Ok(DenseSet::empty(target));
    };
    let base = a.clip(w1);
    if base.is_empty() {
        return Ok(DenseSet::empty(target));
    }
    let window_for = |j: usize| -> Result<Option<Window>> {
        let w = partial_window(j, h, min, max, target);
        if let Some(w) = w {
            w.check_cap(DEFAULT_WINDOW_CAP)?;
        }
        Ok(w)
    };
    let runs = decompose(&base);
    let doubling = match strategy {
        Strategy::Auto => h >= 4 && runs.runs.len() > DOUBLING_RUN_THRESHOLD,
        Strategy::Iterated => false,
        Strategy::Doubling => true,
    };

    let partial = if !doubling {
        let mut s = base.clone();
        for j in 2..=h {
            let Some(w) = window_for(j)? else {
                return Ok(DenseSet::empty(target));
            };
            s = add_runs(&s, &runs, w);
        }
        s
    } else {
        let mut acc: Option<(DenseSet, usize)> = None;
        let mut power = (base, 1usize);
        let mut remaining = h;
        loop {
            if remaining & 1 == 1 {
                acc = Some(match acc {
                    None => power.clone(),
                    Some((r, k)) => {
                        let Some(w) = window_for(k + power.1)? else {
                            return Ok(DenseSet::empty(target));
                        };
                        (sumset(&r, &power.0, w)?, k + power.1)
                    }
                });
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            let Some(w) = window_for(2 * power.1)? else {
                return Ok(DenseSet::empty(target));
            };
            power = (sumset(&power.0, &power.0, w)?, 2 * power.1);
        }
        acc.unwrap().0
    };
    Ok(partial.clip(target))
}

/// Exact `hA ∩ target` for a set bounded below by its window's `lo`: every
/// representation of an integer `<= hi + (h - 1) lo` only uses summands
/// inside the window.
pub fn hfold_exact_bounded_below(a: &DenseSet, h: usize, target: Window) -> Result<SumsetResult> {
    let src = a.window();
    let safe_hi = src.hi() as i128 + (h as i128 - 1) * src.lo() as i128;
    if target.hi() as i128 > safe_hi {
        return Err(Error::TargetExceedsSafeRange {
            lo: target.lo(),
            hi: target.hi(),
            safe_hi: safe_hi.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
        });
    }
    Ok(SumsetResult {
        h,
        source: src,
        target,
        dense: hfold(a, h, target)?,
        exactness: Exactness::Exact,
    })
}

/// Sums of `h` elements of a truncated set: a subset of the true sumset
/// that may miss members whose representations leave the window.
pub fn hfold_truncated(a: &DenseSet, h: usize, target: Window) -> Result<SumsetResult> {
    Ok(SumsetResult {
        h,
        source: a.window(),
        target,
        dense: hfold(a, h, target)?,
        exactness: Exactness::SoundLowerBound,
    })
}

/// Same as `hfold`, computed on independent chunks of the target in parallel.
pub fn hfold_chunked(a: &DenseSet, h: usize, target: Window, chunk_width: u64) -> Result<DenseSet> {
    let parts = target
        .chunks(chunk_width)
        .into_par_iter()
        .map(|w| hfold(a, h, w))
        .collect::<Result<Vec<_>>>()?;
    DenseSet::concat(&parts)
}

/// Number of multisets of `h` elements of `a` with sum `n`, for every `n`
/// in `target` (saturating at `u64::MAX`).
pub fn representation_counts(a: &DenseSet, h: usize, target: Window) -> Result<Vec<u64>> {
    if h == 0 {
        return Err(Error::InvalidParameter("sumset order must be at least 1".into()));
    }
    target.check_cap(DEFAULT_WINDOW_CAP)?;
    let out_len = target.width() as usize;
    let (Some(min), Some(max)) = (a.min(), a.max()) else {
        return Ok(vec![0; out_len]);
    };
    // dp[j][v - base[j]] = multisets of j processed elements summing to v
    let windows: Vec<Option<Window>> = (0..=h)
        .map(|j| if j == 0 { Window::new(0, 0).ok() } else { partial_window(j, h, min, max, target) })
        .collect();
    for w in windows.iter().flatten() {
        w.check_cap(DEFAULT_WINDOW_CAP)?;
    }
    let mut dp: Vec<Vec<u64>> = windows
        .iter()
        .map(|w| vec![0u64; w.map_or(0, |w| w.width() as usize)])
        .collect();
    dp[0][0] = 1;
    for x in a.iter() {
        for j in 1..=h {
            let (Some(wj), Some(wp)) = (windows[j], windows[j - 1]) else {
                continue;
            };
            let (lower, upper) = dp.split_at_mut(j);
            let prev = &lower[j - 1];
            let cur = &mut upper[0];
            // v = u + x with u in wp and v in wj
            let shift = wp.lo() as i128 + x as i128 - wj.lo() as i128;
            let u_start = 0i128.max(-shift) as usize;
            let u_end = (prev.len() as i128).min(cur.len() as i128 - shift).max(0) as usize;
            for (u, &c) in prev.iter().enumerate().take(u_end).skip(u_start) {
                if c != 0 {
                    let v = (u as i128 + shift) as usize;
                    cur[v] = cur[v].saturating_add(c);
                }
            }
        }
    }
    let mut out = vec![0u64; out_len];
    if let Some(wh) = windows[h] {
        for (i, slot) in out.iter_mut().enumerate() {
            let n = target.lo() + i as i64;
            if wh.contains(n) {
                *slot = dp[h][(n - wh.lo()) as usize];
            }
        }
    }
    Ok(out)
}

pub fn representation_count(a: &DenseSet, h: usize, n: i64) -> Result<u64> {
    Ok(representation_counts(a, h, Window::new(n, n)?)?[0])
}

/// The lexicographically smallest sorted multiset of `h` elements of `a`
/// summing to `n`, if any.
pub fn witness(a: &DenseSet, h: usize, n: i64) -> Result<Option<Vec<i64>>> {
    if h == 0 {
        return Err(Error::InvalidParameter("sumset order must be at least 1".into()));
    }
    let (Some(min), Some(max)) = (a.min(), a.max()) else {
        return Ok(None);
    };
    let target = Window::new(n, n)?;
    let Some(w1) = partial_window(1, h, min, max, target) else {
        return Ok(None);
    };
    let base = a.clip(w1);
    let (Some(bmin), Some(bmax)) = (base.min(), base.max()) else {
        return Ok(None);
    };
    // folds[j] = jA over its full range, j = 1..h-1
    let mut folds: Vec<DenseSet> = vec![DenseSet::from_iter(Window::new(0, 0)?, [0])];
    for j in 1..h {
        let w = Window::new(bmin * j as i64, bmax * j as i64)?;
        folds.push(hfold(&base, j, w)?);
    }
    // The smallest first element a with n - a in (h-1)A is the minimum of
    // every representation, so greedily fixing it loses nothing.
    let mut rem = n;
    let mut picked = Vec::with_capacity(h);
    for k in (1..=h).rev() {
        let next = base.iter().find(|&x| folds[k - 1].contains(rem - x));
        match next {
            Some(x) => {
                picked.push(x);
                rem -= x;
            }
            None => return Ok(None),
        }
    }
    debug_assert_eq!(rem, 0);
    Ok(Some(picked))
}
