//! Extremal singular values over many small banded sections.
//!
//! A section `B` of a band operator with half-width `w` has a Gram matrix
//! `G = B^* B` of half-bandwidth `2w`. Whether `sigma_min(B) > t` is decided
//! by a banded Cholesky factorization of `G - t^2 I`; an SVD is only run on
//! sections that could improve the current extremum. The result is the exact
//! extremum of the SVD values over all sections, independent of visiting order.

use std::collections::{HashMap, HashSet};

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::operators::BandOperator;
use crate::words::symbol_key;

/// Relative slack (in units of `||B||^2`) separating the factorization test from
/// rounding in the factorization and in the SVD.
const MARGIN: f64 = 1e-12;

/// Number of evenly spaced sections evaluated up front to seed the search.
const SEEDS: usize = 16;

pub(crate) trait Scalar: ComplexField<RealField = f64> + Copy {
    fn from_c64(z: Complex64) -> Self;

    /// Batched form of [`LocalSections::ldl_ok`] over `LANES` consecutive
    /// sections of a global Gram band; `None` when not specialized.
    fn ldl_lanes(_g: &[Self], _n: usize, _p: usize, _first: usize, _sign: f64, _shift: f64, _buf: &mut Lanes) -> Option<[bool; LANES]> {
        None
    }
}

impl Scalar for f64 {
    fn from_c64(z: Complex64) -> Self {
        z.re
    }

    fn ldl_lanes(g: &[f64], n: usize, p: usize, first: usize, sign: f64, shift: f64, buf: &mut Lanes) -> Option<[bool; LANES]> {
        Some(buf.ldl(g, n, p, first, sign, shift))
    }
}

/// Sections factored together; independent factorizations interleave their
/// division chains.
pub(crate) const LANES: usize = 4;

/// Scratch for [`Lanes::ldl`]: `l[c * (p + 1) + t]` holds `L_{c, c - t}` per lane.
pub(crate) struct Lanes {
    l: Vec<[f64; LANES]>,
    d: Vec<[f64; LANES]>,
    inv: Vec<[f64; LANES]>,
}

impl Lanes {
    fn new(n: usize, p: usize) -> Self {
        Lanes {
            l: vec![[0.0; LANES]; n * (p + 1)],
            d: vec![[0.0; LANES]; n],
            inv: vec![[0.0; LANES]; n],
        }
    }

    /// Positive definiteness of `sign * G + shift * I` for the sections whose
    /// Gram band starts at columns `first..first + LANES` of `g`.
    fn ldl(&mut self, g: &[f64], n: usize, p: usize, first: usize, sign: f64, shift: f64) -> [bool; LANES] {
        let s = p + 1;
        let mut ok = [true; LANES];
        for c in 0..n {
            for t in (0..=p.min(c)).rev() {
                let k = c - t;
                let mut sum = [0.0; LANES];
                for (x, v) in sum.iter_mut().enumerate() {
                    *v = sign * g[(first + x + c) * s + t];
                }
                for m in c.saturating_sub(p)..k {
                    let (a, b, d) = (self.l[c * s + c - m], self.l[k * s + k - m], self.d[m]);
                    for x in 0..LANES {
                        sum[x] -= a[x] * b[x] * d[x];
                    }
                }
                if t == 0 {
                    for x in 0..LANES {
                        let v = sum[x] + shift;
                        let good = v > 0.0;
                        ok[x] &= good;
                        // failed lanes continue on a harmless pivot
                        self.d[c][x] = if good { v } else { 1.0 };
                        self.inv[c][x] = 1.0 / self.d[c][x];
                    }
                } else {
                    let inv = self.inv[k];
                    for x in 0..LANES {
                        self.l[c * s + t][x] = sum[x] * inv[x];
                    }
                }
            }
            if ok == [false; LANES] {
                break;
            }
        }
        ok
    }
}

impl Scalar for Complex64 {
    fn from_c64(z: Complex64) -> Self {
        z
    }
}

/// `(n + 2w) x n` sections with the full band image of the columns, or
/// square `n x n` sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    Tall,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Extremum {
    pub value: f64,
    /// Column start of the first pattern attaining the value.
    pub start: i64,
}

#[derive(Debug, Clone)]
struct Values<T> {
    /// `diag[j + w][r - base] = b_j(r)`.
    diag: Vec<Vec<T>>,
}

/// Sections of one operator over a search window, deduplicated by column
/// pattern when every diagonal has a finite alphabet.
#[derive(Debug, Clone)]
pub(crate) struct LocalSections {
    w: usize,
    n: usize,
    shape: Shape,
    base: i64,
    complex: Values<Complex64>,
    real: Option<Values<f64>>,
    starts: Vec<i64>,
    /// `starts` is the full range `kmin..=kmax`.
    contiguous: bool,
    bound: f64,
}

impl LocalSections {
    pub fn new(op: &BandOperator, n: usize, window: Interval, shape: Shape) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let w = op.half_width();
        let rows_needed = match shape {
            Shape::Tall => n + 2 * w,
            Shape::Square => n,
        };
        if window.len() < rows_needed as u64 {
            return Err(Error::WindowTooShort {
                lo: window.lo,
                hi: window.hi,
                needed: rows_needed as u64,
            });
        }
        let wi = w as i64;
        let (kmin, kmax) = match shape {
            Shape::Tall => (window.lo + wi, window.hi - wi - n as i64 + 1),
            Shape::Square => (window.lo, window.hi - n as i64 + 1),
        };
        // rows touched by any column of any admissible section
        let base = kmin - wi;
        let top = kmax + n as i64 - 1 + wi;
        let diag: Vec<Vec<Complex64>> = op.diagonals().iter().map(|b| b.window(base, top)).collect();
        let bound = op.upper_bound(Interval { lo: base, hi: top });
        let real = op
            .is_real()
            .then(|| Values { diag: diag.iter().map(|v| v.iter().map(|z| z.re).collect()).collect() });

        let finite = op.diagonals().iter().all(|b| b.alphabet().is_some());
        let starts = if finite {
            distinct_starts(&diag, w, n, kmin, kmax, base)
        } else {
            (kmin..=kmax).collect()
        };
        Ok(LocalSections {
            w,
            n,
            shape,
            base,
            complex: Values { diag },
            real,
            contiguous: !finite,
            starts,
            bound,
        })
    }

    pub fn patterns(&self) -> usize {
        self.starts.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Smallest singular value over all sections of `A - lambda`.
    pub fn min_sigma(&self, lambda: Complex64) -> Extremum {
        match (&self.real, lambda.im == 0.0) {
            (Some(v), true) => self.search::<f64>(v, lambda.re, false),
            _ => self.search::<Complex64>(&self.complex, lambda, false),
        }
    }

    /// Largest singular value over all sections of `A`.
    pub fn max_sigma(&self) -> Extremum {
        match &self.real {
            Some(v) => self.search::<f64>(v, 0.0, true),
            None => self.search::<Complex64>(&self.complex, Complex64::new(0.0, 0.0), true),
        }
    }

    /// True when every section of `A - lambda` has `sigma_min > tau`.
    pub fn all_above(&self, lambda: Complex64, tau: f64) -> bool {
        match (&self.real, lambda.im == 0.0) {
            (Some(v), true) => self.above::<f64>(v, lambda.re, tau),
            _ => self.above::<Complex64>(&self.complex, lambda, tau),
        }
    }

    fn row_range(&self, k: i64) -> (i64, i64) {
        let (n, w) = (self.n as i64, self.w as i64);
        match self.shape {
            Shape::Tall => (k - w, k + n - 1 + w),
            Shape::Square => (k, k + n - 1),
        }
    }

    fn entry<T: Scalar>(&self, v: &Values<T>, j: i64, r: i64, lambda: T) -> T {
        let x = v.diag[(j + self.w as i64) as usize][(r - self.base) as usize];
        if j == 0 {
            x - lambda
        } else {
            x
        }
    }

    fn dense<T: Scalar>(&self, v: &Values<T>, k: i64, lambda: T) -> DMatrix<T> {
        let (rlo, rhi) = self.row_range(k);
        let w = self.w as i64;
        DMatrix::from_fn((rhi - rlo + 1) as usize, self.n, |r, c| {
            let (i, col) = (rlo + r as i64, k + c as i64);
            let j = i - col;
            if j.abs() <= w {
                self.entry(v, j, i, lambda)
            } else {
                T::zero()
            }
        })
    }

    fn svd_extreme<T: Scalar>(&self, v: &Values<T>, k: i64, lambda: T, largest: bool) -> f64 {
        let s = self.dense(v, k, lambda).singular_values();
        if largest {
            s.max()
        } else {
            s.min()
        }
    }

    /// Lower band of `G = B^* B`: `h[c * (p + 1) + t] = G_{c, c - t}`.
    fn gram<T: Scalar>(&self, v: &Values<T>, k: i64, lambda: T, h: &mut [T]) {
        let (n, w) = (self.n, self.w as i64);
        let p = 2 * self.w;
        let (rlo, rhi) = self.row_range(k);
        for c in 0..n {
            let col = k + c as i64;
            for t in 0..=p.min(c) {
                let ti = t as i64;
                let mut g = T::zero();
                for j in -w..=w - ti {
                    let r = col + j;
                    if r < rlo || r > rhi {
                        continue;
                    }
                    g += self.entry(v, j, r, lambda).conjugate() * self.entry(v, j + ti, r, lambda);
                }
                h[c * (p + 1) + t] = g;
            }
        }
    }

    /// `LDL^*` of `sign * G + shift * I` in place; false on a nonpositive pivot.
    fn ldl_ok<T: Scalar>(&self, ws: &mut Workspace<T>, sign: f64, shift: f64) -> bool {
        let (n, p) = (self.n, 2 * self.w);
        let s = p + 1;
        let (h, inv) = (&mut ws.h, &mut ws.inv_pivot);
        let sign = T::from_real(sign);
        for c in 0..n {
            for t in (0..=p.min(c)).rev() {
                let k = c - t;
                let mut sum = sign * h[c * s + t];
                for m in c.saturating_sub(p)..k {
                    sum -= h[c * s + c - m] * h[k * s + k - m].conjugate() * h[m * s];
                }
                if t == 0 {
                    let d = sum.real() + shift;
                    if !(d > 0.0) {
                        return false;
                    }
                    h[c * s] = T::from_real(d);
                    inv[c] = 1.0 / d;
                } else {
                    h[c * s + t] = sum * T::from_real(inv[k]);
                }
            }
        }
        true
    }

    fn norm_bound2<T: Scalar>(&self, lambda: T) -> f64 {
        let b = self.bound + lambda.modulus();
        b * b
    }

    fn search<T: Scalar>(&self, v: &Values<T>, lambda: impl Into<Complex64>, largest: bool) -> Extremum {
        let lambda = T::from_c64(lambda.into());
        let margin = MARGIN * self.norm_bound2(lambda);
        let better = |value: f64, start: i64, best: &Extremum| {
            let ord = if largest { value > best.value } else { value < best.value };
            ord || (value == best.value && start < best.start)
        };
        let mut best = Extremum {
            value: if largest { f64::NEG_INFINITY } else { f64::INFINITY },
            start: i64::MAX,
        };
        let step = (self.starts.len() / SEEDS).max(1);
        for &k in self.starts.iter().step_by(step) {
            let value = self.svd_extreme(v, k, lambda, largest);
            if better(value, k, &best) {
                best = Extremum { value, start: k };
            }
        }
        // sigma_max^2 < best^2 - margin, or sigma_min^2 > best^2 + margin
        let test = |best: &Extremum| {
            let b2 = best.value * best.value;
            if largest {
                (-1.0, b2 - margin)
            } else {
                (1.0, -(b2 + margin))
            }
        };
        let mut ws = Workspace::new(self);
        let global = self.global_gram(v, lambda);
        let mut i = 0;
        while i < self.starts.len() {
            let k = self.starts[i];
            let (sign, shift) = test(&best);
            if let (Some(g), true) = (global.as_deref(), i + LANES <= self.starts.len()) {
                let first = (k - self.starts[0]) as usize;
                if let Some(ok) = T::ldl_lanes(g, self.n, 2 * self.w, first, sign, shift, &mut ws.lanes) {
                    let before = best;
                    for (x, pruned) in ok.into_iter().enumerate() {
                        let kx = k + x as i64;
                        if pruned {
                            continue;
                        }
                        // retest against a best improved within this batch
                        if best != before {
                            let (sign, shift) = test(&best);
                            self.section_gram(v, Some(g), kx, lambda, &mut ws.h);
                            if self.ldl_ok(&mut ws, sign, shift) {
                                continue;
                            }
                        }
                        {
                            let value = self.svd_extreme(v, kx, lambda, largest);
                            if better(value, kx, &best) {
                                best = Extremum { value, start: kx };
                            }
                        }
                    }
                    i += LANES;
                    continue;
                }
            }
            self.section_gram(v, global.as_deref(), k, lambda, &mut ws.h);
            if !self.ldl_ok(&mut ws, sign, shift) {
                let value = self.svd_extreme(v, k, lambda, largest);
                if better(value, k, &best) {
                    best = Extremum { value, start: k };
                }
            }
            i += 1;
        }
        best
    }

    fn above<T: Scalar>(&self, v: &Values<T>, lambda: impl Into<Complex64>, tau: f64) -> bool {
        let lambda = T::from_c64(lambda.into());
        let mut ws = Workspace::new(self);
        let global = self.global_gram(v, lambda);
        let mut i = 0;
        while i < self.starts.len() {
            let k = self.starts[i];
            if let (Some(g), true) = (global.as_deref(), i + LANES <= self.starts.len()) {
                let first = (k - self.starts[0]) as usize;
                if let Some(ok) = T::ldl_lanes(g, self.n, 2 * self.w, first, 1.0, -(tau * tau), &mut ws.lanes) {
                    if ok != [true; LANES] {
                        return false;
                    }
                    i += LANES;
                    continue;
                }
            }
            self.section_gram(v, global.as_deref(), k, lambda, &mut ws.h);
            if !self.ldl_ok(&mut ws, 1.0, -(tau * tau)) {
                return false;
            }
            i += 1;
        }
        true
    }

    /// Band of `(A - lambda)^* (A - lambda)` on every column of the window,
    /// laid out like [`Self::gram`] from column `kmin`. A tall section holds
    /// the full support of its columns, so its Gram matrix is a principal
    /// block of this one. Only built when most columns are visited.
    fn global_gram<T: Scalar>(&self, v: &Values<T>, lambda: T) -> Option<Vec<T>> {
        if !(self.contiguous && self.shape == Shape::Tall) {
            return None;
        }
        let kmin = self.starts[0];
        let cols = (self.starts[self.starts.len() - 1] - kmin) as usize + self.n;
        let p = 2 * self.w;
        let w = self.w as i64;
        let mut g = vec![T::zero(); cols * (p + 1)];
        for c in 0..cols {
            let col = kmin + c as i64;
            for t in 0..=p.min(c) {
                let ti = t as i64;
                let mut acc = T::zero();
                for j in -w..=w - ti {
                    acc += self.entry(v, j, col + j, lambda).conjugate() * self.entry(v, j + ti, col + j, lambda);
                }
                g[c * (p + 1) + t] = acc;
            }
        }
        Some(g)
    }

    fn section_gram<T: Scalar>(&self, v: &Values<T>, global: Option<&[T]>, k: i64, lambda: T, h: &mut [T]) {
        match global {
            Some(g) => {
                let s = 2 * self.w + 1;
                let at = (k - self.starts[0]) as usize * s;
                h.copy_from_slice(&g[at..at + self.n * s]);
            }
            None => self.gram(v, k, lambda, h),
        }
    }
}

/// Scratch buffers for one search.
struct Workspace<T> {
    h: Vec<T>,
    inv_pivot: Vec<f64>,
    lanes: Lanes,
}

impl<T: Scalar> Workspace<T> {
    fn new(s: &LocalSections) -> Self {
        Workspace {
            h: vec![T::zero(); s.n * (2 * s.w + 1)],
            inv_pivot: vec![0.0; s.n],
            lanes: Lanes::new(s.n, 2 * s.w),
        }
    }
}

/// First start of every distinct length-`n` column word. A column is the
/// vector `(b_j(c + j))_j`; the section depends only on these `n` columns.
fn distinct_starts(diag: &[Vec<Complex64>], w: usize, n: usize, kmin: i64, kmax: i64, base: i64) -> Vec<i64> {
    let cols = kmin..=kmax + n as i64 - 1;
    let mut ids: HashMap<Vec<(u64, u64)>, u32> = HashMap::new();
    let col_ids: Vec<u32> = cols
        .map(|c| {
            let key: Vec<(u64, u64)> = (0..=2 * w)
                .map(|jj| symbol_key(diag[jj][(c + jj as i64 - w as i64 - base) as usize]))
                .collect();
            let next = ids.len() as u32;
            *ids.entry(key).or_insert(next)
        })
        .collect();
    let mut seen: HashSet<&[u32]> = HashSet::new();
    col_ids
        .windows(n)
        .enumerate()
        .filter(|(_, f)| seen.insert(f))
        .map(|(t, _)| kmin + t as i64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{self, fibonacci, periodic_real, GOLDEN};

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn brute_min(op: &BandOperator, n: usize, window: Interval, lambda: Complex64) -> f64 {
        let w = op.half_width() as i64;
        let n = n as i64;
        (window.lo + w..=window.hi - w - n + 1)
            .map(|k| {
                let m = op
                    .section(iv(k - w, k + n - 1 + w), iv(k, k + n - 1))
                    .unwrap()
                    .to_matrix();
                let d = DMatrix::from_diagonal_element(m.nrows(), m.ncols(), lambda);
                let shifted = m - shift_block(&d, w as usize);
                shifted.singular_values().min()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// lambda placed on the diagonal `i = k` of a tall section.
    fn shift_block(d: &DMatrix<Complex64>, w: usize) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(d.nrows(), d.ncols());
        for c in 0..d.ncols() {
            out[(c + w, c)] = d[(c, c)];
        }
        out
    }

    #[test]
    fn matches_brute_force_scan() {
        let op = BandOperator::schroedinger(fibonacci(GOLDEN).unwrap());
        let window = iv(-40, 60);
        let sections = LocalSections::new(&op, 6, window, Shape::Tall).unwrap();
        assert!(sections.patterns() <= 9);
        for lambda in [0.0, 0.7, -1.3, 2.5] {
            let l = Complex64::new(lambda, 0.0);
            let fast = sections.min_sigma(l).value;
            let slow = brute_min(&op, 6, window, l);
            assert!((fast - slow).abs() < 1e-12, "{lambda}: {fast} vs {slow}");
        }
        let l = Complex64::new(0.3, 0.4);
        let fast = sections.min_sigma(l).value;
        assert!((fast - brute_min(&op, 6, window, l)).abs() < 1e-12);
    }

    #[test]
    fn continuous_sequences_scan_every_position() {
        let q = potentials::quasiperiodic(1.5, potentials::Rotation::golden(), 0.1).unwrap();
        let op = BandOperator::schroedinger(q);
        let window = iv(0, 80);
        let s = LocalSections::new(&op, 5, window, Shape::Tall).unwrap();
        assert_eq!(s.patterns(), 81 - 5 - 2 + 1);
        let l = Complex64::new(0.2, 0.0);
        assert!((s.min_sigma(l).value - brute_min(&op, 5, window, l)).abs() < 1e-12);
    }

    #[test]
    fn square_sections_for_norm() {
        let op = BandOperator::schroedinger(potentials::zero());
        let s = LocalSections::new(&op, 10, iv(0, 99), Shape::Square).unwrap();
        assert_eq!(s.patterns(), 1);
        let expect = 2.0 * (std::f64::consts::PI / 11.0).cos();
        assert!((s.max_sigma().value - expect).abs() < 1e-13);
    }

    #[test]
    fn threshold_test_agrees_with_minimum() {
        let op = BandOperator::schroedinger(periodic_real(&[0.0, 2.0]).unwrap());
        let s = LocalSections::new(&op, 12, iv(0, 200), Shape::Tall).unwrap();
        for lambda in [-3.0, -1.0, 0.5, 1.0, 2.5, 4.0] {
            let l = Complex64::new(lambda, 0.0);
            let g = s.min_sigma(l).value;
            assert!(s.all_above(l, g * 0.99));
            assert!(!s.all_above(l, g * 1.01 + 1e-9));
        }
    }

    #[test]
    fn short_window_is_rejected() {
        let op = BandOperator::identity();
        assert!(LocalSections::new(&op, 5, iv(0, 3), Shape::Tall).is_err());
        assert!(LocalSections::new(&op, 0, iv(0, 3), Shape::Tall).is_err());
    }
}

