//! Lower norms, norm estimates, the spectral indicator `gamma`, pseudospectra,
//! half-line eigenvalues and transfer-matrix growth.
//!
//! `nu_n(A)` is the infimum of `||A x||` over unit `x` supported on `n`
//! consecutive indices. For a band operator it is the smallest singular value
//! over all `(n + 2w) x n` sections whose columns lie in the search window.
//! `gamma_n(lambda) = min(nu_n(A - lambda), nu_n((A - lambda)^*))`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::kernel::{LocalSections, Shape};
use crate::operators::{BandOperator, FiniteSection, HalfLineOperator, Side};
use crate::words::Word;

fn real_matrix(m: &DMatrix<Complex64>) -> Option<DMatrix<f64>> {
    m.iter().all(|z| z.im == 0.0).then(|| m.map(|z| z.re))
}

fn singular_values(s: &FiniteSection) -> Result<nalgebra::DVector<f64>> {
    if s.nrows() < s.ncols() {
        return Err(Error::Underdetermined {
            rows: s.nrows(),
            cols: s.ncols(),
        });
    }
    let m = s.to_matrix();
    Ok(match real_matrix(&m) {
        Some(r) => r.singular_values(),
        None => m.singular_values(),
    })
}

/// `sigma_min` of a section with at least as many rows as columns.
pub fn smallest_singular_value(s: &FiniteSection) -> Result<f64> {
    Ok(singular_values(s)?.min())
}

pub fn largest_singular_value(s: &FiniteSection) -> Result<f64> {
    Ok(singular_values(s)?.max())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LowerNormResult {
    pub n: usize,
    pub value: f64,
    /// First column index of the section attaining the minimum.
    pub argmin_start: i64,
    /// The columns `(b_j(c + j))_{j=-w..w}` of that section.
    pub argmin_pattern: Vec<Word>,
    /// Number of distinct local patterns examined.
    pub positions_examined: usize,
}

fn column_pattern(op: &BandOperator, start: i64, n: usize) -> Vec<Word> {
    let w = op.half_width() as i64;
    (start..start + n as i64)
        .map(|c| Word::new((-w..=w).map(|j| op.entry(c + j, c)).collect()))
        .collect()
}

/// `nu_n(A)` over `window`.
pub fn lower_norm_localized(op: &BandOperator, n: usize, window: Interval) -> Result<LowerNormResult> {
    GammaEvaluator::new(op, n, window)?.lower_norm(Complex64::new(0.0, 0.0))
}

/// Largest singular value over square `n x n` sections in `window`.
/// Non-decreasing in `n` and bounded by [`BandOperator::upper_bound`].
pub fn norm_estimate(op: &BandOperator, n: usize, window: Interval) -> Result<f64> {
    Ok(LocalSections::new(op, n, window, Shape::Square)?.max_sigma().value)
}

/// Prepared sections of `A` and `A^*`, reused across spectral parameters.
#[derive(Debug, Clone)]
pub struct GammaEvaluator {
    op: BandOperator,
    direct: LocalSections,
    adjoint: LocalSections,
    self_adjoint: bool,
}

impl GammaEvaluator {
    pub fn new(op: &BandOperator, n: usize, window: Interval) -> Result<Self> {
        Ok(GammaEvaluator {
            op: op.clone(),
            direct: LocalSections::new(op, n, window, Shape::Tall)?,
            adjoint: LocalSections::new(&op.adjoint(), n, window, Shape::Tall)?,
            self_adjoint: op.self_adjoint_hint(),
        })
    }

    pub fn n(&self) -> usize {
        self.direct.n()
    }

    pub fn patterns(&self) -> usize {
        self.direct.patterns()
    }

    /// `nu_n(A - lambda)`.
    pub fn lower_norm(&self, lambda: Complex64) -> Result<LowerNormResult> {
        let e = self.direct.min_sigma(lambda);
        Ok(LowerNormResult {
            n: self.n(),
            value: e.value,
            argmin_start: e.start,
            argmin_pattern: column_pattern(&self.op, e.start, self.n()),
            positions_examined: self.direct.patterns(),
        })
    }

    /// `(nu_n(A - lambda), nu_n((A - lambda)^*))`, both computed.
    pub fn branches(&self, lambda: Complex64) -> (f64, f64) {
        (
            self.direct.min_sigma(lambda).value,
            self.adjoint.min_sigma(lambda.conj()).value,
        )
    }

    /// For self-adjoint operators at real `lambda` the two branches have
    /// identical sections, and only one is evaluated.
    pub fn gamma(&self, lambda: Complex64) -> f64 {
        let a = self.direct.min_sigma(lambda).value;
        if self.self_adjoint && lambda.im == 0.0 {
            return a;
        }
        a.min(self.adjoint.min_sigma(lambda.conj()).value)
    }

    /// `gamma_n(lambda) > tau`, decided without computing `gamma`.
    pub fn exceeds(&self, lambda: Complex64, tau: f64) -> bool {
        self.direct.all_above(lambda, tau)
            && (self.self_adjoint && lambda.im == 0.0 || self.adjoint.all_above(lambda.conj(), tau))
    }
}

pub fn gamma(op: &BandOperator, lambda: Complex64, n: usize, window: Interval) -> Result<f64> {
    Ok(GammaEvaluator::new(op, n, window)?.gamma(lambda))
}

/// `nu_n(A - lambda)` for each `n` in `ns`.
pub fn convergence_table(
    op: &BandOperator,
    lambda: Complex64,
    ns: &[usize],
    window: Interval,
) -> Result<Vec<LowerNormResult>> {
    ns.iter()
        .map(|&n| GammaEvaluator::new(op, n, window)?.lower_norm(lambda))
        .collect()
}

/// Uniform grid `lo..hi:count` with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl RealGrid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi || (count == 1 && lo != hi) {
            return Err(Error::InvalidParameter(format!("invalid grid {lo}..{hi}:{count}")));
        }
        Ok(RealGrid { lo, hi, count })
    }

    pub fn step(&self) -> f64 {
        if self.count > 1 {
            (self.hi - self.lo) / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Real grid, or the Cartesian product of a real and an imaginary grid.
/// Points are ordered with the imaginary part in the outer loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re: RealGrid,
    pub im: Option<RealGrid>,
}

impl GridSpec {
    pub fn real(re: RealGrid) -> Self {
        GridSpec { re, im: None }
    }

    pub fn points(&self) -> Vec<Complex64> {
        let ims = self.im.map_or(vec![0.0], |g| g.points());
        let res = self.re.points();
        ims.iter()
            .flat_map(|&y| res.iter().map(move |&x| Complex64::new(x, y)))
            .collect()
    }

    /// Largest distance from any point of the covered rectangle to the grid.
    pub fn resolution(&self) -> f64 {
        let a = self.re.step() / 2.0;
        let b = self.im.map_or(0.0, |g| g.step() / 2.0);
        a.hypot(b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub points: Vec<Complex64>,
    pub values: Vec<f64>,
    pub n: usize,
    pub window: Interval,
}

impl GridFunction {
    pub fn sweep(eval: &GammaEvaluator, points: &[Complex64], window: Interval) -> Self {
        GridFunction {
            points: points.to_vec(),
            values: points.iter().map(|&l| eval.gamma(l)).collect(),
            n: eval.n(),
            window,
        }
    }

    pub fn to_csv(&self) -> String {
        use crate::operators::format_real;
        let mut s = String::from("re,im,gamma\n");
        for (p, v) in self.points.iter().zip(&self.values) {
            s.push_str(&format!("{},{},{}\n", format_real(p.re), format_real(p.im), format_real(*v)));
        }
        s
    }
}

/// Run-length encoded level set `{lambda : gamma(lambda) < eps}` in grid order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetMask {
    pub eps: f64,
    pub count: usize,
    /// `(value, length)` runs.
    pub runs: Vec<(bool, usize)>,
}

impl LevelSetMask {
    pub fn from_values(values: &[f64], eps: f64) -> Self {
        let mut runs: Vec<(bool, usize)> = Vec::new();
        for &v in values {
            let inside = v < eps;
            match runs.last_mut() {
                Some((b, len)) if *b == inside => *len += 1,
                _ => runs.push((inside, 1)),
            }
        }
        LevelSetMask {
            eps,
            count: values.len(),
            runs,
        }
    }

    pub fn expand(&self) -> Vec<bool> {
        self.runs
            .iter()
            .flat_map(|&(b, len)| std::iter::repeat(b).take(len))
            .collect()
    }
}

pub fn level_set_masks(grid: &GridFunction, epsilons: &[f64]) -> Result<Vec<LevelSetMask>> {
    epsilons
        .iter()
        .map(|&e| {
            if !(e > 0.0) {
                return Err(Error::InvalidParameter(format!("eps must be positive, got {e}")));
            }
            Ok(LevelSetMask::from_values(&grid.values, e))
        })
        .collect()
}

pub fn pseudospectrum_grid(
    op: &BandOperator,
    grid: &GridSpec,
    epsilons: &[f64],
    n: usize,
    window: Interval,
) -> Result<(GridFunction, Vec<LevelSetMask>)> {
    let eval = GammaEvaluator::new(op, n, window)?;
    let f = GridFunction::sweep(&eval, &grid.points(), window);
    let masks = level_set_masks(&f, epsilons)?;
    Ok((f, masks))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = match real_matrix(m) {
        Some(r) => SymmetricEigen::new(r).eigenvalues.iter().copied().collect(),
        None => {
            // [[Re, -Im], [Im, Re]] has every eigenvalue of m twice
            let n = m.nrows();
            let big = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
                let z = m[(i % n, j % n)];
                match (i < n, j < n) {
                    (true, true) | (false, false) => z.re,
                    (true, false) => -z.im,
                    (false, true) => z.im,
                }
            });
            let mut all: Vec<f64> = SymmetricEigen::new(big).eigenvalues.iter().copied().collect();
            all.sort_by(f64::total_cmp);
            all.into_iter().step_by(2).collect()
        }
    };
    ev.sort_by(f64::total_cmp);
    ev
}

/// A maximal interval of the sweep outside the band mask.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralGap {
    pub lo: f64,
    pub hi: f64,
    /// False for the unbounded parts below and above the bands.
    pub bounded: bool,
    pub eigenvalue_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HalfLineEigReport {
    pub side: Side,
    pub section_size: usize,
    pub grid: RealGrid,
    pub eigenvalues: Vec<f64>,
    pub in_gap: Vec<bool>,
    /// Within `edge_exclusion` of a band edge; never counted as in-gap.
    pub ambiguous: Vec<bool>,
    pub gaps: Vec<SpectralGap>,
    pub reference_n: usize,
    pub threshold: f64,
    pub edge_exclusion: f64,
}

impl HalfLineEigReport {
    pub fn max_per_bounded_gap(&self) -> usize {
        self.gaps
            .iter()
            .filter(|g| g.bounded)
            .map(|g| g.eigenvalue_count)
            .max()
            .unwrap_or(0)
    }
}

/// Eigenvalues closer than this to a band edge are flagged, not classified.
pub const EDGE_EXCLUSION: f64 = 1e-6;

/// Eigenvalues of the `N x N` leading section of a self-adjoint half-line
/// operator, classified against bands of the two-sided operator.
///
/// Bands are where `gamma_{4N}` does not exceed the threshold
/// `max(10 * h / 2, 2 pi / 4N)`: ten times the interpolation error bound of a
/// 1-Lipschitz function at grid spacing `h`, and at least the finite-`n`
/// offset of `gamma_n` inside the spectrum. Band edges are refined by
/// bisection on the same predicate.
pub fn half_line_finite_section(
    h: &HalfLineOperator,
    size: usize,
    grid: RealGrid,
    window: Interval,
) -> Result<HalfLineEigReport> {
    let base = h.base();
    if !base.self_adjoint_hint() {
        return Err(Error::NotSelfAdjoint);
    }
    let eigenvalues = hermitian_eigenvalues(&h.leading_section(size)?.to_matrix());
    let reference_n = 4 * size;
    let eval = GammaEvaluator::new(base, reference_n, window)?;
    let threshold = (5.0 * grid.step()).max(2.0 * std::f64::consts::PI / reference_n as f64);
    let gap_at = |x: f64| eval.exceeds(Complex64::new(x, 0.0), threshold);

    let xs = grid.points();
    let flags: Vec<bool> = xs.iter().map(|&x| gap_at(x)).collect();
    let refine = |mut a: f64, mut b: f64| {
        // gap_at(a) != gap_at(b); shrink to the crossing
        let fa = gap_at(a);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if gap_at(m) == fa {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let mut gaps = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if !flags[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < xs.len() && flags[i] {
            i += 1;
        }
        let lo = if start == 0 { f64::NEG_INFINITY } else { refine(xs[start], xs[start - 1]) };
        let hi = if i == xs.len() { f64::INFINITY } else { refine(xs[i - 1], xs[i]) };
        gaps.push(SpectralGap {
            lo,
            hi,
            bounded: lo.is_finite() && hi.is_finite(),
            eigenvalue_count: 0,
        });
    }

    let mut in_gap = Vec::with_capacity(eigenvalues.len());
    let mut ambiguous = Vec::with_capacity(eigenvalues.len());
    for &e in &eigenvalues {
        let near_edge = gaps
            .iter()
            .any(|g| (e - g.lo).abs() < EDGE_EXCLUSION || (e - g.hi).abs() < EDGE_EXCLUSION);
        let inside = if near_edge { None } else { gaps.iter_mut().find(|g| g.lo < e && e < g.hi) };
        let classified = match inside {
            Some(g) if gap_at(e) => {
                g.eigenvalue_count += 1;
                true
            }
            _ => false,
        };
        in_gap.push(classified);
        ambiguous.push(near_edge);
    }
    Ok(HalfLineEigReport {
        side: h.side(),
        section_size: size,
        grid,
        eigenvalues,
        in_gap,
        ambiguous,
        gaps,
        reference_n,
        threshold,
        edge_exclusion: EDGE_EXCLUSION,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfilePoint {
    pub n: i64,
    pub log_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    pub lambda: f64,
    pub steps: usize,
    pub growth_exponent: f64,
    /// `max |x_n|`; infinite when it overflows `f64`.
    pub max_abs: f64,
    pub log_max_abs: f64,
    pub solution_norm_profile: Vec<ProfilePoint>,
}

const RENORMALIZE_ABOVE: f64 = 1e100;
const PROFILE_POINTS: usize = 200;

/// Iterates `x_{n+1} = (lambda - b(n)) x_n - x_{n-1}` from `x_{-1} = 0`,
/// `x_0 = 1` (mirrored for the minus side) and reports
/// `log(max_n |x_n|) / N` over `x_0..x_N`.
pub fn transfer_matrix_boundedness(h: &HalfLineOperator, lambda: f64, steps: usize) -> Result<TransferReport> {
    let base = h.base();
    if !base.is_schroedinger() {
        return Err(Error::NotSchroedinger);
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let potential = base.diagonal(0).expect("main diagonal");
    if !potential.is_real() {
        return Err(Error::NotSelfAdjoint);
    }
    // site of x_m, m = 0..=steps
    let site = |m: i64| match h.side() {
        Side::Plus => m,
        Side::Minus => -1 - m,
    };
    let b = match h.side() {
        Side::Plus => potential.window(0, steps as i64 - 1),
        Side::Minus => {
            let mut v = potential.window(-(steps as i64), -1);
            v.reverse();
            v
        }
    };
    let every = steps.div_ceil(PROFILE_POINTS).max(1);
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    let mut log_scale = 0.0f64;
    let mut log_max = 0.0f64;
    let mut profile = vec![ProfilePoint { n: site(0), log_abs: 0.0 }];
    for m in 0..steps {
        let next = (lambda - b[m].re) * cur - prev;
        (prev, cur) = (cur, next);
        let log_abs = cur.abs().ln() + log_scale;
        if log_abs > log_max {
            log_max = log_abs;
        }
        if (m + 1) % every == 0 || m + 1 == steps {
            profile.push(ProfilePoint {
                n: site(m as i64 + 1),
                log_abs,
            });
        }
        let big = cur.abs().max(prev.abs());
        if big > RENORMALIZE_ABOVE {
            prev /= big;
            cur /= big;
            log_scale += big.ln();
        }
    }
    Ok(TransferReport {
        lambda,
        steps,
        growth_exponent: log_max / steps as f64,
        max_abs: log_max.exp(),
        log_max_abs: log_max,
        solution_norm_profile: profile,
    })
}
