//! Two-sided fixed points of substitutions, evaluated by descent through the
//! substitution tree in `O(depth * image length)` per index.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Levels beyond this are never needed: every anchored word at least doubles
/// within `letters` steps or the rule is rejected as too slow.
const MAX_LEVELS: usize = 4096;
const TARGET_LEN: u64 = 1 << 63;

#[derive(Debug, Clone, Copy)]
struct Anchor {
    letter: usize,
    /// `sigma^power(letter)` starts (right) or ends (left) with `letter`.
    power: usize,
}

#[derive(Debug, Clone)]
pub struct Substitution {
    letters: Vec<u32>,
    images: Vec<Vec<usize>>,
    /// `lens[k][a] = |sigma^k(a)|`, saturating.
    lens: Vec<Vec<u64>>,
    left: Anchor,
    right: Anchor,
}

impl Substitution {
    pub fn new(rules: &[(u32, Vec<u32>)], seed: (u32, u32)) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, img) in rules {
            if img.is_empty() {
                return Err(Error::InvalidSubstitution(format!("letter {a} maps to the empty word")));
            }
            if map.insert(*a, img.clone()).is_some() {
                return Err(Error::InvalidSubstitution(format!("letter {a} has two rules")));
            }
        }
        let letters: Vec<u32> = map.keys().copied().collect();
        let index = |a: u32| -> Result<usize> {
            letters
                .binary_search(&a)
                .map_err(|_| Error::InvalidSubstitution(format!("letter {a} has no rule")))
        };
        let images = map
            .values()
            .map(|img| img.iter().map(|&b| index(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;

        let mut lens = vec![vec![1u64; letters.len()]];
        let mut extra = None;
        while lens.len() < MAX_LEVELS {
            let prev = lens.last().unwrap();
            let next: Vec<u64> = images
                .iter()
                .map(|img| img.iter().fold(0u64, |acc, &b| acc.saturating_add(prev[b])))
                .collect();
            let grown = next.iter().all(|&l| l >= TARGET_LEN);
            lens.push(next);
            // keep a few more levels so every anchor power fits above the target
            match extra {
                Some(0) => break,
                Some(e) => extra = Some(e - 1),
                None if grown => extra = Some(letters.len()),
                None => {}
            }
        }

        let (left_seed, right_seed) = (index(seed.0)?, index(seed.1)?);
        let mut s = Substitution {
            letters,
            images,
            lens,
            left: Anchor { letter: 0, power: 1 },
            right: Anchor { letter: 0, power: 1 },
        };
        s.right = s.anchor(right_seed, false)?;
        s.left = s.anchor(left_seed, true)?;
        Ok(s)
    }

    /// First (or last) letter of `sigma^p(a)` returns to `a` for some
    /// `p <= #letters` with `|sigma^p(a)| >= 2`.
    fn anchor(&self, a: usize, from_end: bool) -> Result<Anchor> {
        let mut cur = a;
        for p in 1..=self.letters.len() {
            let img = &self.images[cur];
            cur = if from_end { *img.last().unwrap() } else { img[0] };
            if cur == a {
                if self.lens[p][a] < 2 {
                    return Err(Error::InvalidSubstitution(format!(
                        "rule is not expanding on seed letter {}",
                        self.letters[a]
                    )));
                }
                let anchor = Anchor { letter: a, power: p };
                let reach = self.lens.len() - 1 - self.letters.len();
                if self.lens[reach][a] < TARGET_LEN {
                    return Err(Error::InvalidSubstitution(format!(
                        "iterates of seed letter {} grow too slowly",
                        self.letters[a]
                    )));
                }
                return Ok(anchor);
            }
        }
        Err(Error::InvalidSubstitution(format!(
            "no iterate of the rule {} with letter {}",
            if from_end { "ends" } else { "starts" },
            self.letters[a]
        )))
    }

    pub fn symbols(&self) -> Vec<Complex64> {
        self.letters.iter().map(|&a| Complex64::new(a as f64, 0.0)).collect()
    }

    pub fn value_at(&self, n: i64) -> Complex64 {
        let (anchor, pos, from_end) = if n >= 0 {
            (self.right, n as u64, false)
        } else {
            (self.left, (-1 - n) as u64, true)
        };
        // smallest level that is a multiple of the anchor power and long enough
        let mut level = anchor.power;
        while self.lens[level][anchor.letter] <= pos {
            level += anchor.power;
        }
        let mut letter = anchor.letter;
        let mut pos = pos;
        while level > 0 {
            let below = &self.lens[level - 1];
            let img = &self.images[letter];
            let mut found = None;
            if from_end {
                for &b in img.iter().rev() {
                    if pos < below[b] {
                        found = Some(b);
                        break;
                    }
                    pos -= below[b];
                }
            } else {
                for &b in img {
                    if pos < below[b] {
                        found = Some(b);
                        break;
                    }
                    pos -= below[b];
                }
            }
            letter = found.expect("position inside the image");
            level -= 1;
        }
        Complex64::new(self.letters[letter] as f64, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(rules: &BTreeMap<u32, Vec<u32>>, w: &[u32]) -> Vec<u32> {
        w.iter().flat_map(|a| rules[a].iter().copied()).collect()
    }

    #[test]
    fn fibonacci_right_half_by_iteration() {
        let rules: BTreeMap<u32, Vec<u32>> = [(0, vec![1]), (1, vec![1, 0])].into_iter().collect();
        let mut w = vec![1u32];
        for _ in 0..12 {
            w = expand(&rules, &w);
        }
        let s = Substitution::new(&[(0, vec![1]), (1, vec![1, 0])], (1, 1)).unwrap();
        for (i, &a) in w.iter().enumerate() {
            assert_eq!(s.value_at(i as i64).re, a as f64);
        }
    }

    #[test]
    fn fibonacci_left_half_by_iterating_the_square() {
        let rules: BTreeMap<u32, Vec<u32>> = [(0, vec![1]), (1, vec![1, 0])].into_iter().collect();
        let mut w = vec![1u32];
        for _ in 0..12 {
            w = expand(&rules, &expand(&rules, &w));
        }
        let s = Substitution::new(&[(0, vec![1]), (1, vec![1, 0])], (1, 1)).unwrap();
        for (k, &a) in w.iter().rev().enumerate() {
            assert_eq!(s.value_at(-1 - k as i64).re, a as f64);
        }
    }

    #[test]
    fn doubling_rule_is_constant() {
        let s = Substitution::new(&[(0, vec![0, 0])], (0, 0)).unwrap();
        for n in -50..50 {
            assert_eq!(s.value_at(n).re, 0.0);
        }
    }

    #[test]
    fn rejects_degenerate_rules() {
        assert!(Substitution::new(&[(0, vec![0])], (0, 0)).is_err());
        assert!(Substitution::new(&[(0, vec![])], (0, 0)).is_err());
        assert!(Substitution::new(&[(0, vec![1])], (0, 0)).is_err());
        // 0 -> 1, 1 -> 0: first letters alternate but never expand
        assert!(Substitution::new(&[(0, vec![1]), (1, vec![0])], (0, 0)).is_err());
        // 0 -> 01, 1 -> 1 grows linearly
        assert!(Substitution::new(&[(0, vec![0, 1]), (1, vec![1])], (0, 0)).is_err());
    }

    #[test]
    fn thue_morse() {
        let s = Substitution::new(&[(0, vec![0, 1]), (1, vec![1, 0])], (0, 0)).unwrap();
        let expect = [0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0];
        for (i, &a) in expect.iter().enumerate() {
            assert_eq!(s.value_at(i as i64).re, a as f64);
        }
    }
}
