//! Deterministic, lazily evaluable potential sequences `b: Z -> C`.
//!
//! Every generator is a pure function of the index, so any finite window can
//! be materialized on demand and re-materialization is bit-identical.

mod enumeration;
mod substitution;

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::words::{Alphabet, Word};

pub use enumeration::BlockEnumeration;
pub use substitution::Substitution;

/// `(sqrt(5) - 1) / 2`.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Sturmian boundary hits closer than this are reported.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Periodic,
    Quasiperiodic,
    Sturmian,
    Substitution,
    PseudoergodicEnum,
    PseudoergodicRandom,
    ConcatAllowed,
    Explicit,
}

/// Rotation number of a circle map `n -> theta + alpha * n (mod 1)`.
///
/// Rational rotations are evaluated from the exact integer residue of
/// `p * n mod q`, which makes the generated sequences exactly `q`-periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rotation {
    Rational { p: i64, q: u64 },
    Real(f64),
}

impl Rotation {
    pub fn golden() -> Self {
        Rotation::Real(GOLDEN)
    }

    pub fn rational(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("rotation denominator must be positive".into()));
        }
        let g = gcd(p.unsigned_abs(), q).max(1);
        Ok(Rotation::Rational {
            p: p / g as i64,
            q: q / g,
        })
    }

    pub fn value(&self) -> f64 {
        match *self {
            Rotation::Rational { p, q } => p as f64 / q as f64,
            Rotation::Real(a) => a,
        }
    }

    /// Exact period for rational rotations.
    pub fn period(&self) -> Option<u64> {
        match *self {
            Rotation::Rational { q, .. } => Some(q),
            Rotation::Real(_) => None,
        }
    }

    /// Fractional part of `theta + alpha * n`, in `[0, 1)`.
    pub fn phase(&self, theta: f64, n: i64) -> f64 {
        match *self {
            Rotation::Rational { p, q } => {
                let r = (p as i128 * n as i128).rem_euclid(q as i128);
                frac(theta + r as f64 / q as f64)
            }
            Rotation::Real(a) => frac(theta + frac(a * n as f64)),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Which half-open convention the Sturmian coding interval uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalType {
    /// `[1 - beta, 1)`
    I,
    /// `(1 - beta, 1]`, where `1` is identified with `0` on the circle.
    J,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SturmianParams {
    pub alpha: Rotation,
    pub beta: f64,
    pub theta: f64,
    pub interval: IntervalType,
    /// Output for `chi = 0` and `chi = 1`.
    pub values: (Complex64, Complex64),
}

impl SturmianParams {
    /// Golden-mean Sturmian with values `0, 1`, coding interval `I`.
    pub fn golden(theta: f64) -> Self {
        SturmianParams {
            alpha: Rotation::golden(),
            beta: GOLDEN,
            theta,
            interval: IntervalType::I,
            values: (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        }
    }

    fn indicator(&self, phase: f64) -> bool {
        let left = 1.0 - self.beta;
        match self.interval {
            IntervalType::I => phase >= left,
            IntervalType::J => phase > left || phase == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    Enumerate,
    SeededRandom(u64),
}

#[derive(Debug)]
enum Generator {
    Periodic(Vec<Complex64>),
    Quasiperiodic {
        amplitude: f64,
        alpha: Rotation,
        theta: f64,
    },
    Sturmian(SturmianParams),
    Substitution(Substitution),
    Enumerated {
        blocks: BlockEnumeration,
        kind: Kind,
    },
    PseudoergodicRandom {
        alphabet: Alphabet,
        rng: ChaCha8Rng,
    },
    ConcatRandom {
        words: Vec<Vec<Complex64>>,
        rng: ChaCha8Rng,
    },
    Explicit {
        values: Vec<Complex64>,
        offset: i64,
    },
}

/// Words per index reserved in the ChaCha stream; sampling never needs more.
const RNG_STRIDE: u128 = 16;

fn draw(rng: &ChaCha8Rng, counter: u64, bound: usize) -> usize {
    if bound == 1 {
        return 0;
    }
    let mut rng = rng.clone();
    rng.set_word_pos(counter as u128 * RNG_STRIDE);
    rng.gen_range(0..bound)
}

impl Generator {
    fn value_at(&self, n: i64) -> Complex64 {
        match self {
            Generator::Periodic(cycle) => cycle[n.rem_euclid(cycle.len() as i64) as usize],
            Generator::Quasiperiodic {
                amplitude,
                alpha,
                theta,
            } => {
                let phase = alpha.phase(*theta, n);
                Complex64::new(amplitude * (std::f64::consts::TAU * phase).cos(), 0.0)
            }
            Generator::Sturmian(p) => {
                if p.indicator(p.alpha.phase(p.theta, n)) {
                    p.values.1
                } else {
                    p.values.0
                }
            }
            Generator::Substitution(s) => s.value_at(n),
            Generator::Enumerated { blocks, .. } => blocks.value_at(n),
            Generator::PseudoergodicRandom { alphabet, rng } => {
                alphabet.symbols()[draw(rng, n as u64, alphabet.len())]
            }
            Generator::ConcatRandom { .. } => self.window(n, n)[0],
            Generator::Explicit { values, offset } => {
                let k = n - offset;
                if k >= 0 && (k as usize) < values.len() {
                    values[k as usize]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<Complex64> {
        match self {
            Generator::ConcatRandom { words, rng } => {
                let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
                // right half: blocks 0, 1, 2, ... occupy [0, ...)
                if hi >= 0 {
                    let mut start = 0i64;
                    let mut block = 0u64;
                    while start <= hi {
                        let w = &words[draw(rng, 2 * block, words.len())];
                        for (t, v) in w.iter().enumerate() {
                            let i = start + t as i64;
                            if i >= lo && i <= hi {
                                out[(i - lo) as usize] = *v;
                            }
                        }
                        start += w.len() as i64;
                        block += 1;
                    }
                }
                // left half: blocks 0, 1, 2, ... occupy (..., -1], each read forwards
                if lo < 0 {
                    let mut end = -1i64;
                    let mut block = 0u64;
                    while end >= lo {
                        let w = &words[draw(rng, 2 * block + 1, words.len())];
                        let start = end - w.len() as i64 + 1;
                        for (t, v) in w.iter().enumerate() {
                            let i = start + t as i64;
                            if i >= lo && i <= hi {
                                out[(i - lo) as usize] = *v;
                            }
                        }
                        end = start - 1;
                        block += 1;
                    }
                }
                out
            }
            _ => (lo..=hi).map(|n| self.value_at(n)).collect(),
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Generator::Periodic(_) => Kind::Periodic,
            Generator::Quasiperiodic { .. } => Kind::Quasiperiodic,
            Generator::Sturmian(_) => Kind::Sturmian,
            Generator::Substitution(_) => Kind::Substitution,
            Generator::Enumerated { kind, .. } => *kind,
            Generator::PseudoergodicRandom { .. } => Kind::PseudoergodicRandom,
            Generator::ConcatRandom { .. } => Kind::ConcatAllowed,
            Generator::Explicit { .. } => Kind::Explicit,
        }
    }

    fn symbols(&self) -> Option<Vec<Complex64>> {
        match self {
            Generator::Periodic(cycle) => Some(cycle.clone()),
            Generator::Quasiperiodic { alpha, .. } => match alpha.period() {
                Some(q) if q <= 4096 => Some((0..q as i64).map(|n| self.value_at(n)).collect()),
                _ => None,
            },
            Generator::Sturmian(p) => Some(vec![p.values.0, p.values.1]),
            Generator::Substitution(s) => Some(s.symbols()),
            Generator::Enumerated { blocks, .. } => Some(blocks.symbols()),
            Generator::PseudoergodicRandom { alphabet, .. } => Some(alphabet.symbols().to_vec()),
            Generator::ConcatRandom { words, .. } => Some(words.iter().flatten().copied().collect()),
            Generator::Explicit { values, .. } => {
                let mut v = values.clone();
                v.push(Complex64::new(0.0, 0.0));
                Some(v)
            }
        }
    }
}

/// A bi-infinite sequence, possibly viewed through an index shift and a
/// complex conjugation. Cloning is cheap.
///
/// `shifted(k)` is the orbit element `S^k b` with `(S^k b)(n) = b(n + k)`.
#[derive(Debug, Clone)]
pub struct Sequence {
    generator: Arc<Generator>,
    shift: i64,
    conj: bool,
}

impl Sequence {
    fn from_generator(generator: Generator) -> Self {
        Sequence {
            generator: Arc::new(generator),
            shift: 0,
            conj: false,
        }
    }

    pub fn value_at(&self, n: i64) -> Complex64 {
        let v = self.generator.value_at(n + self.shift);
        if self.conj {
            v.conj()
        } else {
            v
        }
    }

    /// Materializes `b(lo..=hi)`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Complex64> {
        if hi < lo {
            return Vec::new();
        }
        let mut v = self.generator.window(lo + self.shift, hi + self.shift);
        if self.conj {
            v.iter_mut().for_each(|x| *x = x.conj());
        }
        v
    }

    pub fn window_of(&self, w: Interval) -> Vec<Complex64> {
        self.window(w.lo, w.hi)
    }

    pub fn shifted(&self, k: i64) -> Sequence {
        Sequence {
            generator: self.generator.clone(),
            shift: self.shift + k,
            conj: self.conj,
        }
    }

    pub fn conjugated(&self) -> Sequence {
        Sequence {
            generator: self.generator.clone(),
            shift: self.shift,
            conj: !self.conj,
        }
    }

    pub fn kind(&self) -> Kind {
        self.generator.kind()
    }

    /// The finite symbol set, or `None` for continuous-valued sequences.
    pub fn alphabet(&self) -> Option<Alphabet> {
        let mut symbols = self.generator.symbols()?;
        if self.conj {
            symbols.iter_mut().for_each(|x| *x = x.conj());
        }
        Some(Alphabet::from_values(&symbols))
    }

    pub fn is_real(&self) -> bool {
        match self.generator.symbols() {
            Some(s) => s.iter().all(|v| v.im == 0.0),
            None => matches!(*self.generator, Generator::Quasiperiodic { .. }),
        }
    }

    /// `Some(c)` when the sequence is the constant `c`.
    pub fn constant_value(&self) -> Option<Complex64> {
        match &*self.generator {
            Generator::Periodic(cycle) if cycle.iter().all(|v| *v == cycle[0]) => {
                Some(if self.conj { cycle[0].conj() } else { cycle[0] })
            }
            _ => None,
        }
    }

    /// Indices in `window` where a Sturmian phase lies within
    /// [`BOUNDARY_TOLERANCE`] of an endpoint of the coding interval.
    pub fn boundary_hits(&self, window: Interval) -> Vec<i64> {
        let Generator::Sturmian(p) = &*self.generator else {
            return Vec::new();
        };
        let left = 1.0 - p.beta;
        window
            .iter()
            .filter(|&n| {
                let phase = p.alpha.phase(p.theta, n + self.shift);
                (phase - left).abs() < BOUNDARY_TOLERANCE
                    || phase < BOUNDARY_TOLERANCE
                    || 1.0 - phase < BOUNDARY_TOLERANCE
            })
            .collect()
    }

    /// For enumerated sequences: the index on the right half where `word`
    /// is listed as a whole unit in the first block of the enumeration that
    /// contains words of its length.
    pub fn enumeration_position(&self, word: &Word) -> Option<i64> {
        let Generator::Enumerated { blocks, .. } = &*self.generator else {
            return None;
        };
        let word = if self.conj { word.conjugated() } else { word.clone() };
        let pos = blocks.listed_position(word.entries())?;
        i64::try_from(pos).ok().map(|p| p - self.shift)
    }
}

/// `b(n) = cycle[n mod q]`.
pub fn periodic(cycle: &[Complex64]) -> Result<Sequence> {
    if cycle.is_empty() {
        return Err(Error::InvalidParameter("periodic cycle must be nonempty".into()));
    }
    Ok(Sequence::from_generator(Generator::Periodic(cycle.to_vec())))
}

pub fn periodic_real(cycle: &[f64]) -> Result<Sequence> {
    let c: Vec<Complex64> = cycle.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    periodic(&c)
}

pub fn constant(value: Complex64) -> Sequence {
    Sequence::from_generator(Generator::Periodic(vec![value]))
}

pub fn zero() -> Sequence {
    constant(Complex64::new(0.0, 0.0))
}

/// `b(n) = amplitude * cos(2 pi (theta + alpha n))`.
pub fn quasiperiodic(amplitude: f64, alpha: Rotation, theta: f64) -> Result<Sequence> {
    if !amplitude.is_finite() || !alpha.value().is_finite() || !theta.is_finite() {
        return Err(Error::InvalidParameter("quasiperiodic parameters must be finite".into()));
    }
    Ok(Sequence::from_generator(Generator::Quasiperiodic {
        amplitude,
        alpha,
        theta,
    }))
}

/// Two-valued circle coding `b(n) = values[chi(frac(theta + alpha n) in interval)]`.
pub fn sturmian(params: SturmianParams) -> Result<Sequence> {
    if !(params.beta > 0.0 && params.beta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in (0, 1), got {}",
            params.beta
        )));
    }
    if !(0.0..1.0).contains(&params.theta) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, 1), got {}",
            params.theta
        )));
    }
    if !params.alpha.value().is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    Ok(Sequence::from_generator(Generator::Sturmian(params)))
}

/// The golden-mean Sturmian sequence with values `0, 1`.
///
/// With `theta = GOLDEN` the right half coincides with the fixed point of
/// `0 -> 1, 1 -> 10`; `theta = 0` gives the same sequence shifted by one.
pub fn fibonacci(theta: f64) -> Result<Sequence> {
    sturmian(SturmianParams::golden(theta))
}

/// Two-sided fixed point of a substitution on letters `0..`, with each letter
/// `a` taking the value `a`. `seed = (left, right)`.
pub fn substitution(rules: &[(u32, Vec<u32>)], seed: (u32, u32)) -> Result<Sequence> {
    Ok(Sequence::from_generator(Generator::Substitution(Substitution::new(
        rules, seed,
    )?)))
}

/// Deterministic pseudo-ergodic sequence: the right half is `B_1 B_2 B_3 ...`
/// where `B_m` lists every word of length `<= m` in length-lexicographic
/// order; the left half mirrors the same stream, `b(-1 - k) = b(k)`.
pub fn pseudo_ergodic_enum(alphabet: &Alphabet) -> Result<Sequence> {
    let words: Vec<Vec<Complex64>> = alphabet.symbols().iter().map(|&s| vec![s]).collect();
    Ok(Sequence::from_generator(Generator::Enumerated {
        blocks: BlockEnumeration::new(words)?,
        kind: Kind::PseudoergodicEnum,
    }))
}

/// iid uniform symbols from a counter-based generator keyed by `(seed, n)`.
pub fn pseudo_ergodic_random(alphabet: &Alphabet, seed: u64) -> Result<Sequence> {
    Ok(Sequence::from_generator(Generator::PseudoergodicRandom {
        alphabet: alphabet.clone(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    }))
}

/// Bi-infinite concatenation of allowed words with a block boundary at 0.
pub fn concat_allowed(words: &[Word], selector: Selector) -> Result<Sequence> {
    if words.is_empty() {
        return Err(Error::InvalidParameter("set of allowed words must be nonempty".into()));
    }
    if words.iter().any(|w| w.is_empty()) {
        return Err(Error::InvalidParameter("allowed words must be nonempty".into()));
    }
    let words: Vec<Vec<Complex64>> = words.iter().map(|w| w.entries().to_vec()).collect();
    let generator = match selector {
        Selector::Enumerate => Generator::Enumerated {
            blocks: BlockEnumeration::new(words)?,
            kind: Kind::ConcatAllowed,
        },
        Selector::SeededRandom(seed) => Generator::ConcatRandom {
            words,
            rng: ChaCha8Rng::seed_from_u64(seed),
        },
    };
    Ok(Sequence::from_generator(generator))
}

/// `values` placed at `offset..`, zero elsewhere.
pub fn explicit(values: &[Complex64], offset: i64) -> Result<Sequence> {
    Ok(Sequence::from_generator(Generator::Explicit {
        values: values.to_vec(),
        offset,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reals(v: &[Complex64]) -> Vec<f64> {
        v.iter().map(|c| c.re).collect()
    }

    fn fib_substitution() -> Sequence {
        substitution(&[(0, vec![1]), (1, vec![1, 0])], (1, 1)).unwrap()
    }

    #[test]
    fn periodic_convention() {
        let s = periodic_real(&[0.0, 1.0]).unwrap();
        assert_eq!(reals(&s.window(-3, 3)), vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(periodic(&[]).is_err());
        let c = periodic_real(&[3.0]).unwrap();
        assert_eq!(c.constant_value(), Some(Complex64::new(3.0, 0.0)));
        assert_eq!(c.alphabet().unwrap().len(), 1);
    }

    #[test]
    fn quasiperiodic_rational_is_exactly_periodic() {
        let s = quasiperiodic(1.0, Rotation::rational(1, 3).unwrap(), 0.0).unwrap();
        let w = s.window(-30, 60);
        for i in 0..w.len() - 3 {
            assert_eq!(w[i].re.to_bits(), w[i + 3].re.to_bits());
        }
        let period: Vec<f64> = reals(&s.window(0, 2));
        let expect = [1.0, (std::f64::consts::TAU / 3.0).cos(), (2.0 * std::f64::consts::TAU / 3.0).cos()];
        for (a, b) in period.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(s.alphabet().unwrap().len(), 3);
    }

    #[test]
    fn quasiperiodic_golden_never_repeats() {
        let s = quasiperiodic(1.0, Rotation::golden(), 0.0).unwrap();
        let mut v: Vec<u64> = s.window(0, 9_999).iter().map(|c| c.re.to_bits()).collect();
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 10_000);
        assert!(s.alphabet().is_none());
    }

    #[test]
    fn quasiperiodic_constant_when_alpha_zero() {
        let s = quasiperiodic(2.0, Rotation::Real(0.0), 0.25).unwrap();
        for v in s.window(-5, 5) {
            assert!(v.re.abs() < 1e-15);
        }
    }

    #[test]
    fn sturmian_validation() {
        let mut p = SturmianParams::golden(0.0);
        p.beta = 2.0;
        let err = sturmian(p).unwrap_err();
        assert!(err.to_string().contains("beta"));
    }

    #[test]
    fn sturmian_rational_is_periodic() {
        let p = SturmianParams {
            alpha: Rotation::rational(1, 2).unwrap(),
            beta: 0.5,
            theta: 0.0,
            interval: IntervalType::I,
            values: (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        };
        let s = sturmian(p).unwrap();
        assert_eq!(reals(&s.window(0, 5)), vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn sturmian_interval_types_differ_only_on_boundary_hits() {
        let mut p = SturmianParams::golden(0.0);
        let a = sturmian(p.clone()).unwrap();
        p.interval = IntervalType::J;
        let b = sturmian(p).unwrap();
        let w = Interval::new(-500, 500).unwrap();
        let hits = a.boundary_hits(w);
        // theta = 0 puts n = 0 on the closed end and n = -1 on 1 - beta
        assert!(hits.contains(&0) && hits.contains(&-1));
        for n in w.iter() {
            if !hits.contains(&n) {
                assert_eq!(a.value_at(n), b.value_at(n), "n = {n}");
            }
        }
        assert_ne!(a.value_at(0), b.value_at(0));
    }

    #[test]
    fn golden_sturmian_matches_fibonacci_substitution() {
        let sub = fib_substitution();
        let aligned = fibonacci(GOLDEN).unwrap();
        assert_eq!(aligned.window(0, 200), sub.window(0, 200));
        // theta = 0 is the same word one step later
        let zero = fibonacci(0.0).unwrap();
        assert_eq!(zero.window(1, 201), sub.window(0, 200));
        assert_eq!(reals(&sub.window(0, 9)), vec![1., 0., 1., 1., 0., 1., 0., 1., 1., 0.]);
    }

    #[test]
    fn shifted_sequence_is_orbit_element() {
        let s = fibonacci(0.0).unwrap();
        for k in [-7i64, 0, 3, 100] {
            let t = s.shifted(k);
            for n in -20..20 {
                assert_eq!(t.value_at(n), s.value_at(n + k));
            }
        }
        let c = s.conjugated().conjugated();
        assert_eq!(c.window(-10, 10), s.window(-10, 10));
    }

    #[test]
    fn pe_enum_first_blocks() {
        let a = Alphabet::from_reals(&[0.0, 1.0]).unwrap();
        let s = pseudo_ergodic_enum(&a).unwrap();
        let expect = [0., 1., 0., 1., 0., 0., 0., 1., 1., 0., 1., 1.];
        assert_eq!(reals(&s.window(0, 11)), expect);
        // mirrored left half
        for k in 0..50 {
            assert_eq!(s.value_at(-1 - k), s.value_at(k));
        }
        let one = pseudo_ergodic_enum(&Alphabet::from_reals(&[5.0]).unwrap()).unwrap();
        assert!(one.window(-20, 20).iter().all(|v| v.re == 5.0));
    }

    #[test]
    fn pe_random_is_deterministic_and_uniform() {
        let a = Alphabet::from_reals(&[-1.0, 1.0]).unwrap();
        let s = pseudo_ergodic_random(&a, 42).unwrap();
        assert_eq!(s.window(-100, 100), s.window(-100, 100));
        let t = pseudo_ergodic_random(&a, 42).unwrap();
        assert_eq!(s.window(-100, 100), t.window(-100, 100));
        let n = 100_000usize;
        let ones = s.window(0, n as i64 - 1).iter().filter(|v| v.re > 0.0).count();
        let sd = (n as f64 * 0.25).sqrt();
        assert!((ones as f64 - n as f64 / 2.0).abs() < 3.0 * sd, "ones = {ones}");
        let c = pseudo_ergodic_random(&Alphabet::from_reals(&[2.0]).unwrap(), 1).unwrap();
        assert!(c.window(-10, 10).iter().all(|v| v.re == 2.0));
    }

    #[test]
    fn concat_single_word_is_periodic() {
        let s = concat_allowed(&[Word::from_reals(&[0.0, 1.0])], Selector::Enumerate).unwrap();
        assert_eq!(reals(&s.window(-4, 3)), vec![0., 1., 0., 1., 0., 1., 0., 1.]);
        let r = concat_allowed(&[Word::from_reals(&[0.0, 1.0])], Selector::SeededRandom(3)).unwrap();
        assert_eq!(r.window(-4, 3), s.window(-4, 3));
        assert!(concat_allowed(&[], Selector::Enumerate).is_err());
        assert!(concat_allowed(&[Word::new(vec![])], Selector::Enumerate).is_err());
    }

    #[test]
    fn concat_random_point_evaluation_matches_window() {
        let t = [Word::from_reals(&[0.0, 0.0]), Word::from_reals(&[1.0])];
        let s = concat_allowed(&t, Selector::SeededRandom(9)).unwrap();
        let w = s.window(-40, 40);
        for (i, n) in (-40..=40).enumerate() {
            assert_eq!(s.value_at(n), w[i]);
        }
    }

    #[test]
    fn explicit_is_zero_outside() {
        let s = explicit(&[Complex64::new(5.0, 0.0), Complex64::new(6.0, 0.0)], 3).unwrap();
        assert_eq!(reals(&s.window(1, 6)), vec![0., 0., 5., 6., 0., 0.]);
    }

    #[test]
    fn enumeration_position_lists_the_word() {
        let a = Alphabet::from_reals(&[0.0, 1.0]).unwrap();
        let s = pseudo_ergodic_enum(&a).unwrap();
        for bits in [vec![0.0], vec![1.0, 1.0], vec![0.0, 1.0, 1.0, 0.0, 1.0]] {
            let w = Word::from_reals(&bits);
            let p = s.enumeration_position(&w).unwrap();
            assert_eq!(s.window(p, p + w.len() as i64 - 1), w.entries());
        }
        // deep inside the enumeration
        let alt: Vec<f64> = (0..34).map(|i| (i % 2) as f64).collect();
        let w = Word::from_reals(&alt);
        let p = s.enumeration_position(&w).unwrap();
        assert!(p > 1_000_000_000);
        assert_eq!(s.window(p, p + 33), w.entries());
    }
}
