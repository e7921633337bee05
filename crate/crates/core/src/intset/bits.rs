//! Word-level bit buffer primitives shared by dense sets and the sumset
//! kernel. Buffers keep every bit at or beyond `len` cleared.

pub(crate) const WORD: usize = 64;

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[inline]
pub(crate) fn get(words: &[u64], i: usize) -> bool {
    words[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set(words: &mut [u64], i: usize) {
    words[i / WORD] |= 1u64 << (i % WORD);
}

/// Clears the bits of the last word that lie at or beyond `len`.
pub(crate) fn mask_tail(words: &mut [u64], len: usize) {
    let rem = len % WORD;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// `dst[i + offset] |= src[i]` for every set bit `i` of `src`, dropping
/// positions that fall outside `[0, dst_len)`.
pub(crate) fn or_shifted(dst: &mut [u64], dst_len: usize, src: &[u64], offset: i64) {
    let dst_words = dst.len() as i64;
    let bit = offset.rem_euclid(WORD as i64) as u32;
    let base = offset.div_euclid(WORD as i64);
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let q = i as i64 + base;
        if q >= dst_words {
            break;
        }
        if q >= 0 {
            dst[q as usize] |= w << bit;
        }
        if bit != 0 && q + 1 >= 0 && q + 1 < dst_words {
            dst[(q + 1) as usize] |= w >> (WORD as u32 - bit);
        }
    }
    mask_tail(dst, dst_len);
}

/// In-place `buf |= buf << shift` (towards higher indices).
pub(crate) fn or_shift_up_in_place(buf: &mut [u64], len: usize, shift: usize) {
    let base = shift / WORD;
    let bit = (shift % WORD) as u32;
    let n = buf.len();
    // Descending order reads every source word before any lower word can
    // overwrite it.
    for i in (0..n).rev() {
        let w = buf[i];
        if w == 0 {
            continue;
        }
        let q = i + base;
        if q < n {
            buf[q] |= w << bit;
        }
        if bit != 0 && q + 1 < n {
            buf[q + 1] |= w >> (WORD as u32 - bit);
        }
    }
    mask_tail(buf, len);
}

/// Iterates the indices of set bits in ascending order.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * WORD + tz)
        })
    })
}

pub(crate) fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}
