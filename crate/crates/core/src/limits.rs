//! Finite-scale certificates for limit-operator relations between sequences.
//!
//! `A_b` is a limit operator of `A_c` when every finite word of `b` occurs in
//! `c` infinitely often (up to `eps` for non-discrete alphabets). On a finite
//! window this is replaced by: every word of `b` near the origin occurs at
//! least twice in each half of `c`'s window, at scale `N` and again at `2N`.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::potentials::Sequence;
use crate::words::{cmp_scalar, gap_of, sort_words, Gap, Interner, Word};

/// Word lists in evidence are truncated to this many entries.
const LISTED: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    LimitOperatorEvidence,
    RecurrenceEvidence,
    #[serde(rename = "minimality-M1-evidence")]
    MinimalityM1Evidence,
    PseudoErgodicEvidence,
    LinearRepetitivityEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Supported,
    Refuted,
    Inconclusive,
}

impl Verdict {
    /// Process exit code: supported 0, refuted 2, inconclusive 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Supported => 0,
            Verdict::Refuted => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Scale {
    pub word_len: usize,
    /// Half-window length `N`: windows are `[-N, -1]` and `[0, N - 1]`.
    pub window: u64,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub relation: Relation,
    pub scale: Scale,
    pub verdict: Verdict,
    /// Counterexample for refuted verdicts, worst case otherwise.
    pub witness: Option<Word>,
    pub evidence: Value,
}

fn check_scale(n: usize, big_n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("word length must be positive".into()));
    }
    if n as u64 > big_n {
        return Err(Error::InvalidParameter(format!(
            "word length {n} exceeds window {big_n}"
        )));
    }
    Ok(())
}

fn finite_alphabet(b: &Sequence, what: &'static str) -> Result<()> {
    b.alphabet().map(|_| ()).ok_or(Error::FiniteAlphabetRequired(what))
}

/// Windows `[-N, -1]` and `[0, N - 1]`.
fn halves(s: &Sequence, big_n: u64) -> [Vec<Complex64>; 2] {
    let n = big_n as i64;
    [s.window(-n, -1), s.window(0, n - 1)]
}

fn words_json(words: &[Word]) -> Value {
    json!(words.iter().take(LISTED).collect::<Vec<_>>())
}

/// Distinct words of length `1..=n` of `values`, sorted by length then
/// lexicographically.
fn distinct_words(values: &[Complex64], n: usize) -> Vec<Word> {
    let mut interner = Interner::default();
    let ids = interner.ids(values);
    let mut out = Vec::new();
    for m in 1..=n.min(ids.len()) {
        let set: HashSet<&[u32]> = ids.windows(m).collect();
        out.extend(sort_words(set.into_iter().map(|f| interner.word(f)).collect()));
    }
    out
}

/// Occurrence counts of `words` in each of two haystacks, exact or within `eps`.
fn occurrence_counts(words: &[Word], hay: &[Vec<Complex64>; 2], eps: Option<f64>) -> Vec<[usize; 2]> {
    match eps {
        None => {
            let mut interner = Interner::default();
            let ids = [interner.ids(&hay[0]), interner.ids(&hay[1])];
            let mut tables: HashMap<usize, [HashMap<&[u32], usize>; 2]> = HashMap::new();
            for w in words {
                if !tables.contains_key(&w.len()) {
                    let t = [count_factors(&ids[0], w.len()), count_factors(&ids[1], w.len())];
                    tables.insert(w.len(), t);
                }
            }
            // reuse the interner to look up each word
            words
                .iter()
                .map(|w| {
                    let key: Option<Vec<u32>> = w.entries().iter().map(|&z| interner.lookup(z)).collect();
                    let t = &tables[&w.len()];
                    match key {
                        Some(k) => [
                            t[0].get(k.as_slice()).copied().unwrap_or(0),
                            t[1].get(k.as_slice()).copied().unwrap_or(0),
                        ],
                        None => [0, 0],
                    }
                })
                .collect()
        }
        Some(e) => words
            .iter()
            .map(|w| {
                let count = |v: &Vec<Complex64>| {
                    if v.len() < w.len() {
                        return 0;
                    }
                    v.windows(w.len()).filter(|f| w.sup_distance(f) < e).count()
                };
                [count(&hay[0]), count(&hay[1])]
            })
            .collect(),
    }
}

fn count_factors(v: &[u32], m: usize) -> HashMap<&[u32], usize> {
    let mut t: HashMap<&[u32], usize> = HashMap::new();
    if v.len() >= m {
        for f in v.windows(m) {
            *t.entry(f).or_default() += 1;
        }
    }
    t
}

/// Tolerance actually used for matching: `None` means exact symbol matching.
fn matching_eps(b: &Sequence, c: &Sequence, eps: Option<f64>) -> Result<(Option<f64>, Option<f64>)> {
    let union = match (b.alphabet(), c.alphabet()) {
        (Some(x), Some(y)) => Some(x.union(&y)),
        _ => None,
    };
    match (eps, union) {
        (Some(e), _) if !(e > 0.0) => Err(Error::InvalidParameter(format!("eps must be positive, got {e}"))),
        // eps at most the separation: an eps-match is an exact match
        (Some(e), Some(u)) if e <= u.separation() => Ok((Some(e), None)),
        (Some(e), _) => Ok((Some(e), Some(e))),
        (None, Some(u)) => {
            let e = if u.separation().is_finite() { u.separation() / 2.0 } else { 0.5 };
            Ok((Some(e), None))
        }
        (None, None) => Err(Error::InvalidParameter(
            "eps is required for continuous alphabets".into(),
        )),
    }
}

/// Every word of length `<= n` in `b`'s window `[-N, N - 1]` occurs at least
/// twice in each half of `c`'s window, at scale `N` and at `2N`.
pub fn limit_operator_evidence(b: &Sequence, c: &Sequence, n: usize, big_n: u64, eps: Option<f64>) -> Result<Certificate> {
    check_scale(n, big_n)?;
    let (reported_eps, eps) = matching_eps(b, c, eps)?;
    let scale = Scale {
        word_len: n,
        window: big_n,
        eps: reported_eps,
    };
    let mut levels = Vec::new();
    for (level, nn) in [big_n, 2 * big_n].into_iter().enumerate() {
        let bh = halves(b, nn);
        let joined: Vec<Complex64> = bh[0].iter().chain(&bh[1]).copied().collect();
        let words = distinct_words(&joined, n);
        let counts = occurrence_counts(&words, &halves(c, nn), eps);
        let missing: Vec<Word> = words
            .iter()
            .zip(&counts)
            .filter(|(_, k)| k[0] + k[1] == 0)
            .map(|(w, _)| w.clone())
            .collect();
        let weak: Vec<(Word, [usize; 2])> = words
            .iter()
            .zip(&counts)
            .filter(|(_, k)| k[0] < 2 || k[1] < 2)
            .map(|(w, k)| (w.clone(), *k))
            .collect();
        let min_left = counts.iter().map(|k| k[0]).min().unwrap_or(0);
        let min_right = counts.iter().map(|k| k[1]).min().unwrap_or(0);
        levels.push((nn, words.len(), missing, weak, min_left, min_right));
        if level == 0 && !levels[0].2.is_empty() {
            break;
        }
    }
    let level_json: Vec<Value> = levels
        .iter()
        .map(|(nn, total, missing, weak, l, r)| {
            json!({
                "window": nn,
                "wordsChecked": total,
                "missingCount": missing.len(),
                "missing": words_json(missing),
                "weakCount": weak.len(),
                "weak": weak.iter().take(LISTED).map(|(w, k)| json!({"word": w, "left": k[0], "right": k[1]})).collect::<Vec<_>>(),
                "minOccurrences": {"left": l, "right": r},
            })
        })
        .collect();
    let first = &levels[0];
    let (verdict, witness) = if let Some(w) = first.2.first() {
        (Verdict::Refuted, Some(w.clone()))
    } else if levels.iter().all(|l| l.3.is_empty()) {
        (Verdict::Supported, None)
    } else {
        let worst = levels.iter().find_map(|l| l.3.first().map(|(w, _)| w.clone()));
        (Verdict::Inconclusive, worst)
    };
    Ok(Certificate {
        relation: Relation::LimitOperatorEvidence,
        scale,
        verdict,
        witness,
        evidence: json!({ "levels": level_json }),
    })
}

fn half_gaps(ids: &[u32], word: &[u32]) -> (Gap, usize) {
    let pos: Vec<i64> = if ids.len() < word.len() {
        Vec::new()
    } else {
        ids.windows(word.len())
            .enumerate()
            .filter(|(_, f)| *f == word)
            .map(|(i, _)| i as i64)
            .collect()
    };
    (gap_of(&pos), pos.len())
}

fn gap_json(g: Gap) -> Value {
    serde_json::to_value(g).expect("gap")
}

/// Positions of every length-`m` factor, for `m` in `1..=n`.
fn factor_positions(ids: &[u32], n: usize) -> Vec<HashMap<&[u32], Vec<i64>>> {
    (1..=n)
        .map(|m| {
            let mut t: HashMap<&[u32], Vec<i64>> = HashMap::new();
            if ids.len() >= m {
                for (i, f) in ids.windows(m).enumerate() {
                    t.entry(f).or_default().push(i as i64);
                }
            }
            t
        })
        .collect()
}

/// Every word of length `n` in `[-N, N - 1]` recurs in both halves with
/// gaps at most `N / 4`.
pub fn recurrence_evidence(b: &Sequence, n: usize, big_n: u64) -> Result<Certificate> {
    finite_alphabet(b, "recurrence evidence")?;
    check_scale(n, big_n)?;
    let mut interner = Interner::default();
    let h = halves(b, big_n);
    let ids = [interner.ids(&h[0]), interner.ids(&h[1])];
    let hd = halves(b, 2 * big_n);
    let ids2 = [interner.ids(&hd[0]), interner.ids(&hd[1])];
    let joined: Vec<u32> = ids[0].iter().chain(&ids[1]).copied().collect();
    let mut words: Vec<&[u32]> = joined.windows(n).collect::<HashSet<_>>().into_iter().collect();
    words.sort_by(|x, y| interner.word(x).cmp_lex(&interner.word(y)));
    let bound = big_n / 4;
    let mut rows = Vec::new();
    let mut absent = None;
    let mut wide = None;
    for w in &words {
        let (gl, cl) = half_gaps(&ids[0], w);
        let (gr, cr) = half_gaps(&ids[1], w);
        let word = interner.word(w);
        let ok = |g: Gap| g.finite().is_some_and(|x| x <= bound);
        if absent.is_none() && (half_gaps(&ids2[0], w).1 == 0 || half_gaps(&ids2[1], w).1 == 0) {
            absent = Some(word.clone());
        }
        if wide.is_none() && !(ok(gl) && ok(gr)) {
            wide = Some(word.clone());
        }
        rows.push(json!({
            "word": word,
            "maxGapLeft": gap_json(gl),
            "maxGapRight": gap_json(gr),
            "occurrences": {"left": cl, "right": cr},
        }));
    }
    let (verdict, witness) = match (absent, wide) {
        (Some(w), _) => (Verdict::Refuted, Some(w)),
        (None, Some(w)) => (Verdict::Inconclusive, Some(w)),
        (None, None) => (Verdict::Supported, None),
    };
    Ok(Certificate {
        relation: Relation::RecurrenceEvidence,
        scale: Scale {
            word_len: n,
            window: big_n,
            eps: None,
        },
        verdict,
        witness,
        evidence: json!({ "gapBound": bound, "words": rows }),
    })
}

/// `max |w|^{-1} maxGap(w)` over words of length `<= n_max` in `[-N, N-1]`,
/// with the word attaining it; infinite when some word occurs only once.
fn repetitivity(b: &Sequence, n_max: usize, big_n: u64) -> (f64, Option<Word>) {
    let n = big_n as i64;
    let mut interner = Interner::default();
    let ids = interner.ids(&b.window(-n, n - 1));
    let mut best = (0.0, None::<Word>);
    for (m, table) in factor_positions(&ids, n_max).into_iter().enumerate() {
        let mut entries: Vec<(&[u32], Vec<i64>)> = table.into_iter().collect();
        entries.sort_by(|x, y| interner.word(x.0).cmp_lex(&interner.word(y.0)));
        for (w, pos) in entries {
            let ratio = match gap_of(&pos) {
                Gap::Finite(g) => g as f64 / (m + 1) as f64,
                Gap::Infinite => f64::INFINITY,
            };
            if ratio > best.0 {
                best = (ratio, Some(interner.word(w)));
            }
        }
    }
    best
}

/// `L = max maxGap(w) / |w|`, supported when finite and stable within 10%
/// under doubling the window.
pub fn linear_repetitivity_estimate(b: &Sequence, n_max: usize, big_n: u64) -> Result<Certificate> {
    finite_alphabet(b, "linear repetitivity estimate")?;
    check_scale(n_max, big_n)?;
    let (l1, w1) = repetitivity(b, n_max, big_n);
    let (l2, w2) = repetitivity(b, n_max, 2 * big_n);
    let stable = l1.is_finite() && l2.is_finite() && (l2 - l1).abs() <= 0.1 * l1;
    let (verdict, witness) = if stable {
        (Verdict::Supported, w2)
    } else {
        (Verdict::Refuted, w2.or(w1))
    };
    let num = |x: f64| if x.is_finite() { json!(x) } else { json!("infinite") };
    Ok(Certificate {
        relation: Relation::LinearRepetitivityEstimate,
        scale: Scale {
            word_len: n_max,
            window: big_n,
            eps: None,
        },
        verdict,
        witness,
        evidence: json!({ "estimate": num(l1), "estimateDoubled": num(l2) }),
    })
}

/// All words of length `n` over `symbols`, in lexicographic order.
fn all_words(symbols: &[Complex64], n: usize) -> Vec<Word> {
    let mut sorted = symbols.to_vec();
    sorted.sort_by(cmp_scalar);
    let k = sorted.len();
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for slot in v.iter_mut().rev() {
                *slot = sorted[idx % k];
                idx /= k;
            }
            Word::new(v)
        })
        .collect()
}

/// Largest `n* <= n_max` with `C(m) = |Sigma|^m` for all `m <= n*` in both
/// halves; supported only when `n* = n_max`.
pub fn pseudo_ergodic_evidence(b: &Sequence, n_max: usize, big_n: u64) -> Result<Certificate> {
    let alphabet = b.alphabet().ok_or(Error::FiniteAlphabetRequired("pseudo-ergodic evidence"))?;
    check_scale(n_max, big_n)?;
    let k = alphabet.len();
    let mut interner = Interner::default();
    let h = halves(b, big_n);
    let ids = [interner.ids(&h[0]), interner.ids(&h[1])];
    let count = |v: &[u32], m: usize| -> usize {
        if v.len() < m {
            0
        } else {
            v.windows(m).collect::<HashSet<_>>().len()
        }
    };
    let mut profile = Vec::new();
    let mut n_star = 0;
    for m in 1..=n_max {
        let full = k.checked_pow(m as u32);
        let (l, r) = (count(&ids[0], m), count(&ids[1], m));
        profile.push(json!({"n": m, "left": l, "right": r, "full": full}));
        if Some(l) == full && Some(r) == full {
            n_star = m;
        } else {
            break;
        }
    }
    let next = n_star + 1;
    let mut missing = Vec::new();
    let mut missing_count = 0usize;
    if k.checked_pow(next as u32).is_some_and(|t| t <= 1 << 16) {
        let present: [HashSet<&[u32]>; 2] = [
            if ids[0].len() >= next { ids[0].windows(next).collect() } else { HashSet::new() },
            if ids[1].len() >= next { ids[1].windows(next).collect() } else { HashSet::new() },
        ];
        for w in all_words(alphabet.symbols(), next) {
            let key: Option<Vec<u32>> = w.entries().iter().map(|&z| interner.lookup(z)).collect();
            let found = key.is_some_and(|key| present.iter().all(|p| p.contains(key.as_slice())));
            if !found {
                missing_count += 1;
                missing.push(w);
            }
        }
    }
    let (verdict, witness) = if n_star == n_max {
        (Verdict::Supported, None)
    } else {
        (Verdict::Refuted, missing.first().cloned())
    };
    Ok(Certificate {
        relation: Relation::PseudoErgodicEvidence,
        scale: Scale {
            word_len: n_max,
            window: big_n,
            eps: None,
        },
        verdict,
        witness,
        evidence: json!({
            "nStar": n_star,
            "alphabetSize": k,
            "profile": profile,
            "missingAt": next,
            "missingCount": missing_count,
            "missing": words_json(&missing),
        }),
    })
}

/// Ordered pairs `(i, j)` checked by [`minimality_report`]: member `i` is
/// tested as a limit operator of member `j`.
pub fn minimality_pairs(size: usize) -> Vec<(usize, usize)> {
    (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).collect()
}

/// Combines pairwise certificates, given in [`minimality_pairs`] order.
pub fn minimality_from_pairs(size: usize, scale: Scale, pairs: &[Certificate]) -> Result<Certificate> {
    if size == 0 {
        return Err(Error::InvalidParameter("family must have at least one member".into()));
    }
    let order = minimality_pairs(size);
    let matrix: Vec<Vec<Verdict>> = (0..size)
        .map(|i| (0..size).map(|j| pairs[i * size + j].verdict).collect())
        .collect();
    let first_refuted = order
        .iter()
        .zip(pairs)
        .find(|(_, c)| c.verdict == Verdict::Refuted);
    let (verdict, witness, at) = if let Some((&(i, j), c)) = first_refuted {
        (Verdict::Refuted, c.witness.clone(), Some([i, j]))
    } else if pairs.iter().all(|c| c.verdict == Verdict::Supported) {
        (Verdict::Supported, None, None)
    } else {
        let (&(i, j), c) = order
            .iter()
            .zip(pairs)
            .find(|(_, c)| c.verdict != Verdict::Supported)
            .expect("non-supported pair");
        (Verdict::Inconclusive, c.witness.clone(), Some([i, j]))
    };
    Ok(Certificate {
        relation: Relation::MinimalityM1Evidence,
        scale,
        verdict,
        witness,
        evidence: json!({
            "matrix": matrix,
            "pair": at,
            "pairs": pairs,
        }),
    })
}

/// Limit-operator evidence for every ordered pair, self-pairs included.
pub fn minimality_report(family: &[Sequence], n: usize, big_n: u64, eps: Option<f64>) -> Result<Certificate> {
    let pairs = minimality_pairs(family.len())
        .into_iter()
        .map(|(i, j)| limit_operator_evidence(&family[i], &family[j], n, big_n, eps))
        .collect::<Result<Vec<_>>>()?;
    let scale = pairs.first().map_or(
        Scale {
            word_len: n,
            window: big_n,
            eps,
        },
        |c| c.scale,
    );
    minimality_from_pairs(family.len(), scale, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{self, fibonacci, periodic_real, pseudo_ergodic_enum, GOLDEN};
    use crate::words::{positions, Alphabet, WindowView};

    fn pe() -> Sequence {
        pseudo_ergodic_enum(&Alphabet::from_reals(&[0.0, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn periodic_is_limit_of_pseudo_ergodic() {
        let c = limit_operator_evidence(&periodic_real(&[0.0, 1.0]).unwrap(), &pe(), 6, 10_000, None).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        assert_eq!(c.scale.eps, Some(0.5));
    }

    #[test]
    fn pseudo_ergodic_is_not_limit_of_periodic() {
        let p = periodic_real(&[0.0, 1.0]).unwrap();
        let c = limit_operator_evidence(&pe(), &p, 2, 1_000, None).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        let w = c.witness.clone().unwrap();
        assert_eq!(w, Word::from_reals(&[0.0, 0.0]));
        let missing = &c.evidence["levels"][0]["missing"];
        assert_eq!(missing, &json!([[0.0, 0.0], [1.0, 1.0]]));
        // witness occurs in b's window and not in c's
        let bv = WindowView::from_bounds(&pe(), -1_000, 999).unwrap();
        let cv = WindowView::from_bounds(&p, -1_000, 999).unwrap();
        assert!(!positions(&w, &bv).unwrap().is_empty());
        assert!(positions(&w, &cv).unwrap().is_empty());
    }

    #[test]
    fn fibonacci_is_self_similar() {
        let f = fibonacci(GOLDEN).unwrap();
        let c = limit_operator_evidence(&f, &f, 8, 10_000, None).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
    }

    #[test]
    fn continuous_alphabets_need_eps() {
        let q = potentials::quasiperiodic(1.0, potentials::Rotation::golden(), 0.0).unwrap();
        assert!(limit_operator_evidence(&q, &q, 2, 100, None).is_err());
        let q2 = potentials::quasiperiodic(1.0, potentials::Rotation::golden(), 0.37).unwrap();
        let c = limit_operator_evidence(&q, &q2, 2, 300, Some(0.2)).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        assert!(recurrence_evidence(&q, 2, 100).unwrap_err().to_string().contains("recurrence evidence requires finite alphabet"));
    }

    #[test]
    fn recurrence() {
        let p = periodic_real(&[0.0, 1.0, 1.0, 0.0, 1.0]).unwrap();
        let c = recurrence_evidence(&p, 5, 1_000).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        for row in c.evidence["words"].as_array().unwrap() {
            assert_eq!(row["maxGapLeft"], 5);
            assert_eq!(row["maxGapRight"], 5);
        }
        let f = recurrence_evidence(&fibonacci(GOLDEN).unwrap(), 10, 10_000).unwrap();
        assert_eq!(f.verdict, Verdict::Supported);
        let r = potentials::pseudo_ergodic_random(&Alphabet::from_reals(&[0.0, 1.0]).unwrap(), 7).unwrap();
        assert_ne!(recurrence_evidence(&r, 14, 4_000).unwrap().verdict, Verdict::Supported);
        // ...000111...: 00 never occurs on the right
        let step = potentials::explicit(&vec![Complex64::new(1.0, 0.0); 5_000], 0).unwrap();
        let c = recurrence_evidence(&step, 2, 1_000).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
    }

    #[test]
    fn repetitivity() {
        let p = periodic_real(&[0.0, 1.0, 1.0]).unwrap();
        let c = linear_repetitivity_estimate(&p, 4, 1_000).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        assert!(c.evidence["estimate"].as_f64().unwrap() <= 3.0);
        let f = linear_repetitivity_estimate(&fibonacci(GOLDEN).unwrap(), 10, 10_000).unwrap();
        assert_eq!(f.verdict, Verdict::Supported);
        let e = linear_repetitivity_estimate(&pe(), 10, 10_000).unwrap();
        assert_eq!(e.verdict, Verdict::Refuted);
    }

    #[test]
    fn pseudo_ergodicity() {
        let c = pseudo_ergodic_evidence(&pe(), 10, 100_000).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        assert_eq!(c.evidence["nStar"], 10);
        let f = pseudo_ergodic_evidence(&fibonacci(GOLDEN).unwrap(), 5, 10_000).unwrap();
        assert_eq!(f.evidence["nStar"], 1);
        assert_eq!(f.witness, Some(Word::from_reals(&[0.0, 0.0])));
        let p = pseudo_ergodic_evidence(&periodic_real(&[0.0, 1.0]).unwrap(), 4, 1_000).unwrap();
        assert_eq!(p.evidence["missing"], json!([[0.0, 0.0], [1.0, 1.0]]));
    }

    #[test]
    fn minimality() {
        let fam = [fibonacci(0.0).unwrap(), fibonacci(0.3).unwrap()];
        let c = minimality_report(&fam, 8, 10_000, None).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        let p = periodic_real(&[0.0, 1.0]).unwrap();
        let c = minimality_report(&[p.clone(), p.shifted(1)], 6, 1_000, None).unwrap();
        assert_eq!(c.verdict, Verdict::Supported);
        let c = minimality_report(&[pe(), periodic_real(&[0.0]).unwrap()], 4, 10_000, None).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.evidence["pair"], json!([0, 1]));
        assert_eq!(c.evidence["matrix"][1][0], "supported");
        assert_eq!(Verdict::Refuted.exit_code(), 2);
    }

    #[test]
    fn transitivity_at_fixed_scale() {
        let a = periodic_real(&[0.0]).unwrap();
        let b = periodic_real(&[0.0, 0.0, 1.0]).unwrap();
        let c = pe();
        let (n, big) = (5, 10_000);
        let ab = limit_operator_evidence(&a, &b, n, big, None).unwrap();
        let bc = limit_operator_evidence(&b, &c, n, big, None).unwrap();
        assert_eq!((ab.verdict, bc.verdict), (Verdict::Refuted, Verdict::Supported));
        let a = periodic_real(&[0.0, 0.0, 1.0]).unwrap().shifted(1);
        let ab = limit_operator_evidence(&a, &b, n, big, None).unwrap();
        assert_eq!(ab.verdict, Verdict::Supported);
        assert_eq!(limit_operator_evidence(&a, &c, n, big, None).unwrap().verdict, Verdict::Supported);
    }
}
