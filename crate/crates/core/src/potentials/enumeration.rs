//! Block enumeration of all finite concatenations over a set of words.
//!
//! With letters `t_0, ..., t_{k-1}` (each a nonempty word), block `B_m` lists
//! every letter-string of length `1..=m` in length-lexicographic order, each
//! expanded into its concatenation of `t_i`. The stream `B_1 B_2 B_3 ...` fills
//! the right half-line starting at 0; the left half-line holds the same stream
//! of words placed leftwards from -1, each word read forwards.
//!
//! All offsets are `u128` with saturation; positions that fit in `i64` never
//! saturate for alphabets of practical size.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BlockEnumeration {
    words: Vec<Vec<Complex64>>,
    lens: Vec<u128>,
    /// Sum of all word lengths.
    total: u128,
    /// `group[j - 1]`: expanded length of all letter-strings of length `j`.
    group: Vec<u128>,
}

const MAX_GROUPS: usize = 128;

fn pow(k: u128, e: u32) -> u128 {
    k.checked_pow(e).unwrap_or(u128::MAX)
}

fn mul(a: u128, b: u128) -> u128 {
    a.saturating_mul(b)
}

impl BlockEnumeration {
    pub fn new(words: Vec<Vec<Complex64>>) -> Result<Self> {
        if words.is_empty() || words.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidParameter(
                "enumeration needs a nonempty set of nonempty words".into(),
            ));
        }
        let lens: Vec<u128> = words.iter().map(|w| w.len() as u128).collect();
        let total: u128 = lens.iter().sum();
        let k = words.len() as u128;
        let mut group = Vec::new();
        for j in 1..=MAX_GROUPS as u32 {
            let g = mul(mul(j as u128, pow(k, j - 1)), total);
            group.push(g);
            if g == u128::MAX {
                break;
            }
        }
        Ok(BlockEnumeration {
            words,
            lens,
            total,
            group,
        })
    }

    fn k(&self) -> u128 {
        self.words.len() as u128
    }

    pub fn symbols(&self) -> Vec<Complex64> {
        self.words.iter().flatten().copied().collect()
    }

    fn group_len(&self, j: usize) -> u128 {
        self.group.get(j - 1).copied().unwrap_or(u128::MAX)
    }

    /// Expanded length of all strings of length `len` extending a prefix of
    /// expanded length `prefix_len` by `rem` free letters.
    fn subtree_len(&self, prefix_len: u128, rem: u32) -> u128 {
        let k = self.k();
        let base = mul(pow(k, rem), prefix_len);
        if rem == 0 {
            base
        } else {
            base.saturating_add(mul(mul(rem as u128, pow(k, rem - 1)), self.total))
        }
    }

    /// Word index and offset inside that word for stream position `pos`.
    fn locate(&self, mut pos: u128) -> (usize, usize) {
        // block
        let mut m = 1usize;
        loop {
            let block: u128 = (1..=m).fold(0u128, |acc, j| acc.saturating_add(self.group_len(j)));
            if pos < block {
                break;
            }
            pos -= block;
            m += 1;
        }
        // length group within the block
        let mut j = 1usize;
        while pos >= self.group_len(j) {
            pos -= self.group_len(j);
            j += 1;
        }
        // descend through the lexicographic tree of strings of length j
        let mut chosen = Vec::with_capacity(j);
        let mut prefix_len = 0u128;
        for d in 0..j {
            let rem = (j - d - 1) as u32;
            let mut picked = false;
            for (i, &l) in self.lens.iter().enumerate() {
                let size = self.subtree_len(prefix_len + l, rem);
                if pos < size {
                    chosen.push(i);
                    prefix_len += l;
                    picked = true;
                    break;
                }
                pos -= size;
            }
            debug_assert!(picked);
        }
        for i in chosen {
            if pos < self.lens[i] {
                return (i, pos as usize);
            }
            pos -= self.lens[i];
        }
        unreachable!("position lies inside the chosen string")
    }

    pub fn value_at(&self, n: i64) -> Complex64 {
        if n >= 0 {
            let (i, off) = self.locate(n as u128);
            self.words[i][off]
        } else {
            let (i, off) = self.locate((-1 - n) as u128);
            let w = &self.words[i];
            w[w.len() - 1 - off]
        }
    }

    /// Start of `target` (a concatenation of whole words) when listed as a
    /// unit in block `B_len`, where `len` is its number of words. Only exact
    /// decompositions into single-symbol words are searched when every word
    /// has length 1; otherwise the word must split greedily.
    pub fn listed_position(&self, target: &[Complex64]) -> Option<u128> {
        let letters = self.decompose(target)?;
        let m = letters.len();
        let mut pos: u128 = 0;
        for mm in 1..m {
            pos = pos.saturating_add((1..=mm).fold(0u128, |acc, j| acc.saturating_add(self.group_len(j))));
        }
        for j in 1..m {
            pos = pos.saturating_add(self.group_len(j));
        }
        let mut prefix_len = 0u128;
        for (d, &letter) in letters.iter().enumerate() {
            let rem = (m - d - 1) as u32;
            for &l in &self.lens[..letter] {
                pos = pos.saturating_add(self.subtree_len(prefix_len + l, rem));
            }
            prefix_len += self.lens[letter];
        }
        if pos == u128::MAX {
            None
        } else {
            Some(pos)
        }
    }

    fn decompose(&self, target: &[Complex64]) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        let mut rest = target;
        while !rest.is_empty() {
            let i = self
                .words
                .iter()
                .position(|w| rest.len() >= w.len() && rest[..w.len()] == w[..])?;
            out.push(i);
            rest = &rest[self.words[i].len()..];
        }
        if out.is_empty() {
            None
        } else {
            Some(out)
        }
    }
}
