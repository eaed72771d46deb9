//! Alphabets, finite words, subword search and factor complexity.
//!
//! All quantities here (`pos`, `#`, `W_n`, the complexity function) are
//! computed on finite windows of a bi-infinite sequence. They are
//! under-approximations of the asymptotic objects; complexity profiles carry
//! a saturation flag obtained by doubling the window and comparing.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::potentials::Sequence;

/// Hashable identity of a scalar. `-0.0` and `0.0` are the same symbol.
pub(crate) fn symbol_key(z: Complex64) -> (u64, u64) {
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

/// Lexicographic order on scalars: real part, then imaginary part.
pub fn cmp_scalar(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    symbols: Vec<Complex64>,
    separation: f64,
}

impl Alphabet {
    /// Fails on repeated symbols or an empty list.
    pub fn new(symbols: &[Complex64]) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for s in symbols {
            if !s.re.is_finite() || !s.im.is_finite() {
                return Err(Error::InvalidAlphabet(format!("symbol {s} is not finite")));
            }
            if !seen.insert(symbol_key(*s)) {
                return Err(Error::InvalidAlphabet(format!("symbol {s} repeated")));
            }
        }
        Ok(Self::build(symbols.to_vec()))
    }

    pub fn from_reals(symbols: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = symbols.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Alphabet::new(&v)
    }

    /// Distinct values of `values`, in order of first appearance.
    pub(crate) fn from_values(values: &[Complex64]) -> Self {
        let mut seen = HashSet::new();
        let symbols: Vec<Complex64> = values
            .iter()
            .copied()
            .filter(|s| seen.insert(symbol_key(*s)))
            .collect();
        Self::build(symbols)
    }

    fn build(symbols: Vec<Complex64>) -> Self {
        let mut separation = f64::INFINITY;
        for (i, a) in symbols.iter().enumerate() {
            for b in &symbols[i + 1..] {
                separation = separation.min((a - b).norm());
            }
        }
        Alphabet { symbols, separation }
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Minimum pairwise distance; `+inf` for a single symbol.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut v = self.symbols.clone();
        v.extend_from_slice(&other.symbols);
        Alphabet::from_values(&v)
    }
}

/// A finite word. The empty word is allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Word(Vec<Complex64>);

impl Word {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Word(entries)
    }

    pub fn from_reals(entries: &[f64]) -> Self {
        Word(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugated(&self) -> Word {
        Word(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn cmp_lex(&self, other: &Word) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match cmp_scalar(a, b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    /// `||self - other||_inf`; words must have equal length.
    pub fn sup_distance(&self, other: &[Complex64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if z.im == 0.0 {
                write!(f, "{}", z.re)?;
            } else {
                write!(f, "{z}")?;
            }
        }
        write!(f, "]")
    }
}

/// Bare reals when every entry is real, `[re, im]` pairs otherwise.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let real = self.0.iter().all(|z| z.im == 0.0);
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for z in &self.0 {
            if real {
                seq.serialize_element(&z.re)?;
            } else {
                seq.serialize_element(&[z.re, z.im])?;
            }
        }
        seq.end()
    }
}

/// Finite window `b(lo..=hi)` of a sequence, materialized on first use.
#[derive(Debug)]
pub struct WindowView {
    sequence: Sequence,
    window: Interval,
    values: OnceLock<Vec<Complex64>>,
}

impl Clone for WindowView {
    fn clone(&self) -> Self {
        WindowView::new(self.sequence.clone(), self.window)
    }
}

impl WindowView {
    pub fn new(sequence: Sequence, window: Interval) -> Self {
        WindowView {
            sequence,
            window,
            values: OnceLock::new(),
        }
    }

    pub fn from_bounds(sequence: &Sequence, lo: i64, hi: i64) -> Result<Self> {
        Ok(WindowView::new(sequence.clone(), Interval::new(lo, hi)?))
    }

    pub fn values(&self) -> &[Complex64] {
        self.values.get_or_init(|| self.sequence.window_of(self.window))
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.window.len() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The same entries seen through `S^k b`, i.e. the window `[lo - k, hi - k]`
    /// of the shifted sequence.
    pub fn shifted(&self, k: i64) -> WindowView {
        WindowView::new(self.sequence.shifted(k), self.window.translate(-k))
    }

    pub fn doubled(&self) -> WindowView {
        WindowView::new(self.sequence.clone(), self.window.doubled())
    }
}

/// Maps scalars to dense ids so factors can be hashed as `&[u32]`.
#[derive(Debug, Default)]
pub(crate) struct Interner {
    ids: HashMap<(u64, u64), u32>,
    table: Vec<Complex64>,
}

impl Interner {
    pub fn id(&mut self, z: Complex64) -> u32 {
        let next = self.table.len() as u32;
        let id = *self.ids.entry(symbol_key(z)).or_insert(next);
        if id == next {
            self.table.push(z);
        }
        id
    }

    pub fn ids(&mut self, values: &[Complex64]) -> Vec<u32> {
        values.iter().map(|&z| self.id(z)).collect()
    }

    pub fn lookup(&self, z: Complex64) -> Option<u32> {
        self.ids.get(&symbol_key(z)).copied()
    }

    pub fn word(&self, ids: &[u32]) -> Word {
        Word(ids.iter().map(|&i| self.table[i as usize]).collect())
    }
}

fn check_search(w: &Word, view: &WindowView) -> Result<()> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if view.len() < w.len() {
        return Err(Error::WindowTooShort {
            lo: view.window.lo,
            hi: view.window.hi,
            needed: w.len() as u64,
        });
    }
    Ok(())
}

/// All `k` in the window with `b(k..k+|w|) == w` exactly.
pub fn positions(w: &Word, view: &WindowView) -> Result<Vec<i64>> {
    check_search(w, view)?;
    let lo = view.window.lo;
    Ok(view
        .values()
        .windows(w.len())
        .enumerate()
        .filter(|(_, f)| *f == w.entries())
        .map(|(i, _)| lo + i as i64)
        .collect())
}

/// All `k` in the window with `||b(k..k+|w|) - w||_inf < eps`.
pub fn positions_eps(w: &Word, view: &WindowView, eps: f64) -> Result<Vec<i64>> {
    check_search(w, view)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let lo = view.window.lo;
    Ok(view
        .values()
        .windows(w.len())
        .enumerate()
        .filter(|(_, f)| w.sup_distance(f) < eps)
        .map(|(i, _)| lo + i as i64)
        .collect())
}

pub fn count_occurrences(w: &Word, view: &WindowView, eps: Option<f64>) -> Result<usize> {
    Ok(match eps {
        None => positions(w, view)?.len(),
        Some(e) => positions_eps(w, view, e)?.len(),
    })
}

fn check_len(view: &WindowView, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("word length must be positive".into()));
    }
    if view.len() < n {
        return Err(Error::WindowTooShort {
            lo: view.window.lo,
            hi: view.window.hi,
            needed: n as u64,
        });
    }
    Ok(())
}

pub(crate) fn distinct_factors(ids: &[u32], n: usize) -> HashSet<&[u32]> {
    if ids.len() < n {
        return HashSet::new();
    }
    ids.windows(n).collect()
}

pub(crate) fn sort_words(mut words: Vec<Word>) -> Vec<Word> {
    words.sort_by(|a, b| a.cmp_lex(b));
    words
}

/// Distinct length-`n` factors in the window, sorted lexicographically.
pub fn subword_set(view: &WindowView, n: usize) -> Result<Vec<Word>> {
    check_len(view, n)?;
    let mut interner = Interner::default();
    let ids = interner.ids(view.values());
    let words = distinct_factors(&ids, n)
        .into_iter()
        .map(|f| interner.word(f))
        .collect();
    Ok(sort_words(words))
}

fn counts(values: &[Complex64], max_len: usize) -> Vec<usize> {
    let mut interner = Interner::default();
    let ids = interner.ids(values);
    (1..=max_len).map(|n| distinct_factors(&ids, n).len()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    pub count: usize,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityProfile {
    pub max_len: usize,
    pub counts: Vec<usize>,
    pub saturated: Vec<bool>,
    pub window: Interval,
    pub one_sided: bool,
}

impl ComplexityProfile {
    /// `C(n)`, 1-based.
    pub fn count(&self, n: usize) -> usize {
        self.counts[n - 1]
    }

    pub fn rows(&self) -> Vec<ProfileRow> {
        (1..=self.max_len)
            .map(|n| ProfileRow {
                n,
                count: self.counts[n - 1],
                saturated: self.saturated[n - 1],
            })
            .collect()
    }

    pub fn fully_saturated(&self) -> bool {
        self.saturated.iter().all(|&s| s)
    }

    /// First `n` with `C(n) = C(n + 1)`, both saturated.
    pub fn plateau(&self) -> Option<usize> {
        (1..self.max_len).find(|&n| {
            self.counts[n - 1] == self.counts[n] && self.saturated[n - 1] && self.saturated[n]
        })
    }
}

/// `C(n)` for `n = 1..=max_len`; `saturated[n]` compares against the doubled window.
pub fn complexity_profile(view: &WindowView, max_len: usize) -> Result<ComplexityProfile> {
    check_len(view, max_len.max(1))?;
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    let base = counts(view.values(), max_len);
    let doubled = counts(view.doubled().values(), max_len);
    let saturated = base.iter().zip(&doubled).map(|(a, b)| a == b).collect();
    Ok(ComplexityProfile {
        max_len,
        counts: base,
        saturated,
        window: view.window,
        one_sided: view.window.is_one_sided(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    PeriodicConsistent,
    SturmianConsistent,
    SturmianComplexityAmbiguous,
    PseudoergodicConsistent,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tag: ClassTag,
    /// Window-based classification tests necessary conditions only.
    pub finite_evidence: bool,
}

/// Necessary-condition classification of a factor-complexity profile.
pub fn classify(profile: &ComplexityProfile, alphabet_size: usize) -> Classification {
    let c = &profile.counts;
    let tag = if let Some(n) = profile.plateau() {
        if c[n - 1..].iter().all(|&v| v == c[n - 1]) {
            ClassTag::PeriodicConsistent
        } else {
            ClassTag::Other
        }
    } else if alphabet_size >= 2
        && c.iter()
            .enumerate()
            .all(|(i, &v)| Some(v) == alphabet_size.checked_pow(i as u32 + 1))
    {
        ClassTag::PseudoergodicConsistent
    } else if c.iter().enumerate().all(|(i, &v)| v == i + 2) {
        if profile.one_sided {
            ClassTag::SturmianConsistent
        } else {
            ClassTag::SturmianComplexityAmbiguous
        }
    } else {
        ClassTag::Other
    };
    Classification {
        tag,
        finite_evidence: true,
    }
}

/// Largest distance between consecutive occurrences; `Infinite` with fewer
/// than two occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gap {
    Finite(u64),
    Infinite,
}

impl Gap {
    pub fn finite(&self) -> Option<u64> {
        match *self {
            Gap::Finite(g) => Some(g),
            Gap::Infinite => None,
        }
    }
}

impl Serialize for Gap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gap::Finite(g) => serializer.serialize_u64(*g),
            Gap::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapStatistics {
    pub max_gap: Gap,
    pub occurrences: usize,
}

pub(crate) fn gap_of(positions: &[i64]) -> Gap {
    positions
        .windows(2)
        .map(|p| (p[1] - p[0]) as u64)
        .max()
        .map_or(Gap::Infinite, Gap::Finite)
}

pub fn gap_statistics(w: &Word, view: &WindowView) -> Result<GapStatistics> {
    let pos = positions(w, view)?;
    Ok(GapStatistics {
        max_gap: gap_of(&pos),
        occurrences: pos.len(),
    })
}

/// Smallest `p <= max_period` with `b(k) = b(k + p)` throughout the window.
pub fn verify_period(view: &WindowView, max_period: usize) -> Option<usize> {
    let v = view.values();
    (1..=max_period.min(v.len().saturating_sub(1)))
        .find(|&p| (0..v.len() - p).all(|i| v[i] == v[i + p]))
}
