//! Text specifications of potentials, operators, grids and index ranges.
//!
//! ```text
//! potential := periodic:[v,...]
//!            | quasi:amp=A,alpha=X|p/q,theta=T
//!            | sturmian:alpha=X,beta=B,theta=T,type=I|J,lo=V0,hi=V1
//!            | fib | fib:theta=T
//!            | subst:rules=0>1;1>10,seed=L|R
//!            | pe-enum:alphabet=[v,...]
//!            | pe-rand:alphabet=[v,...],seed=N
//!            | concat:T=[00,1],mode=enum|rand,seed=N
//!            | explicit:[v,...]@offset
//! operator  := schroedinger(<potential>) | band(w=W; d<j>=<potential>; ...)
//!            | identity | laplacian | shift
//! grid      := lo..hi:count | lo..hi:count*lo..hi:count   (real x imaginary)
//! range     := lo..hi
//! scalar    := 1.5 | -2 | 1+2i | 0.5-1i | 3i
//! ```
//!
//! Any real parameter may be written `golden` for (sqrt 5 - 1) / 2.
//! Error positions are 1-based character columns into the full input.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::operators::BandOperator;
use crate::potentials::{self, IntervalType, Rotation, Selector, Sequence, SturmianParams, GOLDEN};
use crate::spectra::{GridSpec, RealGrid};
use crate::words::{Alphabet, Word};

/// A slice of the input together with its byte offset in the full input.
#[derive(Debug, Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    at: usize,
}

impl<'a> Span<'a> {
    fn new(text: &'a str) -> Self {
        Span { text, at: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.at + 1, msg)
    }

    fn sub(&self, from: usize, to: usize) -> Span<'a> {
        Span {
            text: &self.text[from..to],
            at: self.at + from,
        }
    }

    fn trim(&self) -> Span<'a> {
        let start = self.text.len() - self.text.trim_start().len();
        let end = self.text.trim_end().len();
        if start >= end {
            return self.sub(start.min(end), start.min(end));
        }
        self.sub(start, end)
    }

    fn split_once(&self, pat: char) -> Option<(Span<'a>, Span<'a>)> {
        let i = self.text.find(pat)?;
        Some((self.sub(0, i), self.sub(i + pat.len_utf8(), self.text.len())))
    }

    /// Splits on `sep` outside brackets and parentheses.
    fn split_top(&self, sep: char) -> Result<Vec<Span<'a>>> {
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in self.text.char_indices() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(self.sub(i, i).err(format!("unbalanced '{ch}'")));
                    }
                }
                c if c == sep && depth == 0 => {
                    parts.push(self.sub(start, i));
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(self.sub(self.text.len(), self.text.len()).err("unclosed bracket"));
        }
        parts.push(self.sub(start, self.text.len()));
        Ok(parts)
    }

    /// Contents of `open ... close` wrapping the whole span.
    fn inside(&self, open: char, close: char) -> Result<Span<'a>> {
        let t = self.trim();
        if !t.text.starts_with(open) {
            return Err(t.err(format!("expected '{open}'")));
        }
        if !t.text.ends_with(close) {
            return Err(t.sub(t.text.len(), t.text.len()).err(format!("expected '{close}'")));
        }
        Ok(t.sub(1, t.text.len() - 1))
    }
}

fn number(s: Span) -> Result<f64> {
    let t = s.trim();
    t.text
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| t.err(format!("expected a number, found '{}'", t.text)))
}

/// A number, or `golden` for the inverse golden mean.
fn real(s: Span) -> Result<f64> {
    if s.trim().text == "golden" {
        return Ok(GOLDEN);
    }
    number(s)
}

fn integer<T: std::str::FromStr>(s: Span) -> Result<T> {
    let t = s.trim();
    t.text
        .parse::<T>()
        .map_err(|_| t.err(format!("expected an integer, found '{}'", t.text)))
}

fn scalar_span(s: Span) -> Result<Complex64> {
    let t = s.trim();
    let text = t.text;
    let bad = || t.err(format!("expected a scalar, found '{text}'"));
    if let Some(body) = text.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or the leading sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
        if !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(number(t)?, 0.0))
}

pub fn parse_scalar(text: &str) -> Result<Complex64> {
    scalar_span(Span::new(text))
}

fn scalar_list(s: Span) -> Result<Vec<Complex64>> {
    let body = s.inside('[', ']')?;
    if body.trim().text.is_empty() {
        return Ok(Vec::new());
    }
    body.split_top(',')?.into_iter().map(scalar_span).collect()
}

fn alphabet(s: Span) -> Result<Alphabet> {
    let v = scalar_list(s)?;
    Alphabet::new(&v).map_err(|e| s.err(e.to_string()))
}

/// `key=value` pairs, each key at most once and from `allowed`.
fn key_values<'a>(s: Span<'a>, allowed: &[&str]) -> Result<Vec<(&'a str, Span<'a>)>> {
    let mut out: Vec<(&str, Span)> = Vec::new();
    if s.trim().text.is_empty() {
        return Ok(out);
    }
    for part in s.split_top(',')? {
        let (k, v) = part.split_once('=').ok_or_else(|| part.trim().err("expected key=value"))?;
        let key = k.trim();
        if !allowed.contains(&key.text) {
            return Err(key.err(format!(
                "unknown key '{}', expected one of {}",
                key.text,
                allowed.join(", ")
            )));
        }
        if out.iter().any(|(x, _)| *x == key.text) {
            return Err(key.err(format!("key '{}' given twice", key.text)));
        }
        out.push((key.text, v));
    }
    Ok(out)
}

fn get<'a>(kv: &[(&str, Span<'a>)], key: &str) -> Option<Span<'a>> {
    kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn required<'a>(kv: &[(&str, Span<'a>)], key: &str, whole: Span) -> Result<Span<'a>> {
    get(kv, key).ok_or_else(|| whole.err(format!("missing key '{key}'")))
}

fn rotation(s: Span) -> Result<Rotation> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = integer(p)?;
        let q: u64 = integer(q)?;
        return Rotation::rational(p, q).map_err(|e| t.err(e.to_string()));
    }
    Ok(Rotation::Real(real(t)?))
}

fn with_position<T>(s: Span, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => s.err(other.to_string()),
    })
}

/// Letters are single digits; `0>1;1>10` maps `0 -> 1`, `1 -> 1 0`.
fn rules(s: Span) -> Result<Vec<(u32, Vec<u32>)>> {
    let digit = |span: Span, ch: char| {
        ch.to_digit(10).ok_or_else(|| span.err(format!("letters are digits, found '{ch}'")))
    };
    s.split_top(';')?
        .into_iter()
        .map(|r| {
            let (a, img) = r.split_once('>').ok_or_else(|| r.trim().err("expected rule a>image"))?;
            let a = a.trim();
            let mut chars = a.text.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(ch), None) => digit(a, ch)?,
                _ => return Err(a.err("expected a single-digit letter")),
            };
            let img = img.trim();
            let image = img.text.chars().map(|ch| digit(img, ch)).collect::<Result<Vec<_>>>()?;
            Ok((letter, image))
        })
        .collect()
}

fn allowed_words(s: Span) -> Result<Vec<Word>> {
    let body = s.inside('[', ']')?;
    body.split_top(',')?
        .into_iter()
        .map(|w| {
            let w = w.trim();
            if w.text.starts_with('[') {
                Ok(Word::new(scalar_list(w)?))
            } else {
                let v = w
                    .text
                    .chars()
                    .map(|ch| {
                        ch.to_digit(10)
                            .map(|d| Complex64::new(d as f64, 0.0))
                            .ok_or_else(|| w.err(format!("expected digits or a bracketed word, found '{ch}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Word::new(v))
            }
        })
        .collect()
}

fn potential(s: Span, default_seed: u64) -> Result<Sequence> {
    let s = s.trim();
    let (head, body) = match s.split_once(':') {
        Some((h, b)) => (h.trim(), Some(b)),
        None => (s, None),
    };
    let body_or_empty = body.unwrap_or(s.sub(s.text.len(), s.text.len()));
    match head.text {
        "periodic" => {
            let b = body.ok_or_else(|| s.err("periodic needs a cycle"))?;
            with_position(b, potentials::periodic(&scalar_list(b)?))
        }
        "quasi" => {
            let kv = key_values(body_or_empty, &["amp", "alpha", "theta"])?;
            let amp = get(&kv, "amp").map(number).transpose()?.unwrap_or(1.0);
            let alpha = rotation(required(&kv, "alpha", s)?)?;
            let theta = get(&kv, "theta").map(real).transpose()?.unwrap_or(0.0);
            with_position(s, potentials::quasiperiodic(amp, alpha, theta))
        }
        "sturmian" => {
            let kv = key_values(body_or_empty, &["alpha", "beta", "theta", "type", "lo", "hi"])?;
            let alpha = get(&kv, "alpha").map(rotation).transpose()?.unwrap_or(Rotation::golden());
            let beta_span = get(&kv, "beta");
            let beta = beta_span.map(real).transpose()?.unwrap_or(GOLDEN);
            let theta = get(&kv, "theta").map(real).transpose()?.unwrap_or(0.0);
            let interval = match get(&kv, "type").map(|t| t.trim()) {
                None => IntervalType::I,
                Some(t) if t.text == "I" => IntervalType::I,
                Some(t) if t.text == "J" => IntervalType::J,
                Some(t) => return Err(t.err("type must be I or J")),
            };
            let lo = get(&kv, "lo").map(scalar_span).transpose()?.unwrap_or(Complex64::new(0.0, 0.0));
            let hi = get(&kv, "hi").map(scalar_span).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
            let params = SturmianParams {
                alpha,
                beta,
                theta,
                interval,
                values: (lo, hi),
            };
            if !(beta > 0.0 && beta < 1.0) {
                let at = beta_span.unwrap_or(s).trim();
                return Err(at.err(format!("beta must lie in (0, 1), got {beta}")));
            }
            with_position(s, potentials::sturmian(params))
        }
        "fib" => {
            let kv = key_values(body_or_empty, &["theta"])?;
            let theta = get(&kv, "theta").map(real).transpose()?.unwrap_or(GOLDEN);
            with_position(s, potentials::fibonacci(theta))
        }
        "subst" => {
            let kv = key_values(body_or_empty, &["rules", "seed"])?;
            let r = rules(required(&kv, "rules", s)?)?;
            let seed_span = required(&kv, "seed", s)?;
            let seed = match seed_span.split_once('|') {
                Some((l, r)) => (integer(l)?, integer(r)?),
                None => {
                    let x = integer(seed_span)?;
                    (x, x)
                }
            };
            with_position(s, potentials::substitution(&r, seed))
        }
        "pe-enum" => {
            let kv = key_values(body_or_empty, &["alphabet"])?;
            let a = alphabet(required(&kv, "alphabet", s)?)?;
            with_position(s, potentials::pseudo_ergodic_enum(&a))
        }
        "pe-rand" => {
            let kv = key_values(body_or_empty, &["alphabet", "seed"])?;
            let a = alphabet(required(&kv, "alphabet", s)?)?;
            let seed = get(&kv, "seed").map(integer).transpose()?.unwrap_or(default_seed);
            with_position(s, potentials::pseudo_ergodic_random(&a, seed))
        }
        "concat" => {
            let kv = key_values(body_or_empty, &["T", "mode", "seed"])?;
            let words = allowed_words(required(&kv, "T", s)?)?;
            let seed = get(&kv, "seed").map(integer).transpose()?.unwrap_or(default_seed);
            let selector = match get(&kv, "mode").map(|m| m.trim()) {
                None => Selector::Enumerate,
                Some(m) if m.text == "enum" => Selector::Enumerate,
                Some(m) if m.text == "rand" => Selector::SeededRandom(seed),
                Some(m) => return Err(m.err("mode must be enum or rand")),
            };
            with_position(s, potentials::concat_allowed(&words, selector))
        }
        "explicit" => {
            let b = body.ok_or_else(|| s.err("explicit needs a list of values"))?;
            let (values, offset) = match b.text.rfind('@') {
                Some(i) => (b.sub(0, i), integer(b.sub(i + 1, b.text.len()))?),
                None => (b, 0),
            };
            with_position(b, potentials::explicit(&scalar_list(values)?, offset))
        }
        other => Err(head.err(format!("unknown potential '{other}'"))),
    }
}

pub fn parse_potential(spec: &str) -> Result<Sequence> {
    parse_potential_seeded(spec, 0)
}

/// `default_seed` is used by random generators without an explicit seed.
pub fn parse_potential_seeded(spec: &str, default_seed: u64) -> Result<Sequence> {
    potential(Span::new(spec), default_seed)
}

/// Splits band arguments at `;` only where a new `w=` or `d<j>=` starts, so
/// substitution rules inside a diagonal keep their own semicolons.
fn band_args(s: Span) -> Vec<Span> {
    let text = s.text;
    let mut cuts = vec![0];
    for (i, _) in text.match_indices(';') {
        let rest = text[i + 1..].trim_start();
        let starts_arg = rest.starts_with("w=")
            || rest.starts_with("w =")
            || (rest.starts_with('d')
                && rest[1..]
                    .trim_start_matches(['-', '+'])
                    .starts_with(|c: char| c.is_ascii_digit()));
        if starts_arg {
            cuts.push(i + 1);
        }
    }
    cuts.push(text.len() + 1);
    cuts.windows(2).map(|c| s.sub(c[0], c[1] - 1)).collect()
}

fn operator(s: Span, default_seed: u64) -> Result<BandOperator> {
    let s = s.trim();
    match s.text {
        "identity" => return Ok(BandOperator::identity()),
        "laplacian" => return Ok(BandOperator::schroedinger(potentials::zero())),
        "shift" => return Ok(BandOperator::shift_operator()),
        _ => {}
    }
    let Some(open) = s.text.find('(') else {
        return Err(s.err(format!("unknown operator '{}'", s.text)));
    };
    let head = s.sub(0, open).trim();
    let args = s.sub(open, s.text.len()).inside('(', ')')?;
    match head.text {
        "schroedinger" => Ok(BandOperator::schroedinger(potential(args, default_seed)?)),
        "band" => {
            let mut width: Option<i64> = None;
            let mut diagonals: Vec<(i64, Sequence)> = Vec::new();
            for arg in band_args(args) {
                let arg = arg.trim();
                if arg.text.is_empty() {
                    continue;
                }
                let (k, v) = arg.split_once('=').ok_or_else(|| arg.err("expected w=W or d<j>=<potential>"))?;
                let k = k.trim();
                if k.text == "w" {
                    width = Some(integer::<i64>(v)?).filter(|w| *w >= 0);
                    if width.is_none() {
                        return Err(v.trim().err("band width must be nonnegative"));
                    }
                } else if let Some(j) = k.text.strip_prefix('d') {
                    let j: i64 = integer(k.sub(1, 1 + j.len()))?;
                    if diagonals.iter().any(|(x, _)| *x == j) {
                        return Err(k.err(format!("diagonal {j} given twice")));
                    }
                    diagonals.push((j, potential(v, default_seed)?));
                } else {
                    return Err(k.err(format!("unknown band argument '{}'", k.text)));
                }
            }
            if let Some(w) = width {
                if let Some((j, _)) = diagonals.iter().find(|(j, _)| j.abs() > w) {
                    return Err(args.err(format!("diagonal {j} lies outside band width {w}")));
                }
                if w > 0 && !diagonals.iter().any(|(j, _)| j.abs() == w) {
                    diagonals.push((w, potentials::zero()));
                }
            }
            with_position(s, BandOperator::from_diagonals(&diagonals))
        }
        other => Err(head.err(format!("unknown operator '{other}'"))),
    }
}

pub fn parse_operator(spec: &str) -> Result<BandOperator> {
    parse_operator_seeded(spec, 0)
}

pub fn parse_operator_seeded(spec: &str, default_seed: u64) -> Result<BandOperator> {
    operator(Span::new(spec), default_seed)
}

fn bounds(s: Span) -> Result<(Span, Span)> {
    let t = s.trim();
    let i = t.text.find("..").ok_or_else(|| t.err("expected lo..hi"))?;
    Ok((t.sub(0, i), t.sub(i + 2, t.text.len())))
}

fn real_grid(s: Span) -> Result<RealGrid> {
    let (range, count) = s.split_once(':').ok_or_else(|| s.trim().err("expected lo..hi:count"))?;
    let (lo, hi) = bounds(range)?;
    let (lo, hi, count) = (number(lo)?, number(hi)?, integer::<usize>(count)?);
    RealGrid::new(lo, hi, count).map_err(|e| s.trim().err(e.to_string()))
}

pub fn parse_real_grid(spec: &str) -> Result<RealGrid> {
    real_grid(Span::new(spec))
}

/// `re` or `re*im`.
pub fn parse_grid(spec: &str) -> Result<GridSpec> {
    let s = Span::new(spec);
    match s.split_once('*') {
        Some((re, im)) => Ok(GridSpec {
            re: real_grid(re)?,
            im: Some(real_grid(im)?),
        }),
        None => Ok(GridSpec::real(real_grid(s)?)),
    }
}

/// Inclusive `lo..hi`.
pub fn parse_range(spec: &str) -> Result<Interval> {
    let s = Span::new(spec);
    let (lo, hi) = bounds(s)?;
    let (lo, hi) = (integer::<i64>(lo)?, integer::<i64>(hi)?);
    Interval::new(lo, hi).map_err(|e| s.err(e.to_string()))
}

/// Comma-separated positive reals.
pub fn parse_epsilons(spec: &str) -> Result<Vec<f64>> {
    Span::new(spec)
        .split_top(',')?
        .into_iter()
        .map(|p| {
            let x = number(p)?;
            if x > 0.0 {
                Ok(x)
            } else {
                Err(p.trim().err("eps must be positive"))
            }
        })
        .collect()
}
