//! Band operators `A = sum_{j=-w}^{w} M_{b_j} S^j` on `l^2(Z)`.
//!
//! Index convention: `(S x)(n) = x(n - 1)`, so `S^j` contributes to the
//! diagonal `i - k = j` and the matrix entries are `a_{i,k} = b_{i-k}(i)`.
//! The shift `S` itself has ones at `i - k = 1`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::potentials::{self, Sequence};
use crate::words::symbol_key;

/// Default cap on the number of rows and of columns of a dense section.
pub const DEFAULT_SECTION_CAP: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct BandOperator {
    half_width: usize,
    /// `diagonals[j + w]` is `b_j`.
    diagonals: Vec<Sequence>,
    self_adjoint: bool,
}

impl BandOperator {
    /// `S^{-1} + M_b + S`.
    pub fn schroedinger(potential: Sequence) -> Self {
        let one = potentials::constant(Complex64::new(1.0, 0.0));
        let self_adjoint = potential.is_real();
        BandOperator {
            half_width: 1,
            diagonals: vec![one.clone(), potential, one],
            self_adjoint,
        }
    }

    /// Missing diagonals inside `-w..=w` are zero, where `w` is the largest
    /// `|j|` given.
    pub fn from_diagonals(diagonals: &[(i64, Sequence)]) -> Result<Self> {
        let w = diagonals.iter().map(|(j, _)| j.unsigned_abs()).max().unwrap_or(0) as usize;
        let mut slots: Vec<Option<Sequence>> = vec![None; 2 * w + 1];
        for (j, s) in diagonals {
            let slot = &mut slots[(j + w as i64) as usize];
            if slot.is_some() {
                return Err(Error::InvalidParameter(format!("diagonal {j} given twice")));
            }
            *slot = Some(s.clone());
        }
        let diagonals: Vec<Sequence> = slots
            .into_iter()
            .map(|s| s.unwrap_or_else(potentials::zero))
            .collect();
        let self_adjoint = hermitian_by_construction(&diagonals, w);
        Ok(BandOperator {
            half_width: w,
            diagonals,
            self_adjoint,
        })
    }

    pub fn identity() -> Self {
        BandOperator::from_diagonals(&[(0, potentials::constant(Complex64::new(1.0, 0.0)))])
            .expect("single diagonal")
    }

    /// The shift `S` with `(S x)(n) = x(n - 1)`.
    pub fn shift_operator() -> Self {
        BandOperator::from_diagonals(&[(1, potentials::constant(Complex64::new(1.0, 0.0)))])
            .expect("single diagonal")
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `b_j`, or `None` outside the band.
    pub fn diagonal(&self, j: i64) -> Option<&Sequence> {
        let w = self.half_width as i64;
        (-w..=w).contains(&j).then(|| &self.diagonals[(j + w) as usize])
    }

    pub(crate) fn diagonals(&self) -> &[Sequence] {
        &self.diagonals
    }

    /// True when the construction guarantees `A = A^*`.
    pub fn self_adjoint_hint(&self) -> bool {
        self.self_adjoint
    }

    pub fn is_real(&self) -> bool {
        self.diagonals.iter().all(Sequence::is_real)
    }

    /// Band width 1 with both off-diagonals the constant 1.
    pub fn is_schroedinger(&self) -> bool {
        let one = Some(Complex64::new(1.0, 0.0));
        self.half_width == 1
            && self.diagonals[0].constant_value() == one
            && self.diagonals[2].constant_value() == one
    }

    pub fn entry(&self, i: i64, k: i64) -> Complex64 {
        match self.diagonal(i - k) {
            Some(b) => b.value_at(i),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `S^{-k} A S^k`, whose entries are `a_{i+k, j+k}`.
    pub fn shift(&self, k: i64) -> BandOperator {
        BandOperator {
            half_width: self.half_width,
            diagonals: self.diagonals.iter().map(|b| b.shifted(k)).collect(),
            self_adjoint: self.self_adjoint,
        }
    }

    /// `A^*`, with diagonals `b^*_j(i) = conj(b_{-j}(i - j))`.
    pub fn adjoint(&self) -> BandOperator {
        let w = self.half_width as i64;
        let diagonals = (-w..=w)
            .map(|j| self.diagonals[(w - j) as usize].shifted(-j).conjugated())
            .collect();
        BandOperator {
            half_width: self.half_width,
            diagonals,
            self_adjoint: self.self_adjoint,
        }
    }

    pub fn section(&self, rows: Interval, cols: Interval) -> Result<FiniteSection> {
        self.section_capped(rows, cols, DEFAULT_SECTION_CAP)
    }

    pub fn section_capped(&self, rows: Interval, cols: Interval, cap: u64) -> Result<FiniteSection> {
        if rows.len() > cap || cols.len() > cap {
            return Err(Error::SectionTooLarge {
                rows: rows.len(),
                cols: cols.len(),
                cap,
            });
        }
        let w = self.half_width as i64;
        let (m, n) = (rows.len() as usize, cols.len() as usize);
        let mut entries = vec![Complex64::new(0.0, 0.0); m * n];
        for j in -w..=w {
            let b = &self.diagonals[(j + w) as usize];
            // rows i with i - j inside cols
            let lo = rows.lo.max(cols.lo + j);
            let hi = rows.hi.min(cols.hi + j);
            if lo > hi {
                continue;
            }
            for (t, v) in b.window(lo, hi).into_iter().enumerate() {
                let i = lo + t as i64;
                let r = (i - rows.lo) as usize;
                let c = (i - j - cols.lo) as usize;
                entries[r * n + c] = v;
            }
        }
        Ok(FiniteSection { rows, cols, entries })
    }

    /// `A x` for `x` supported on `[start, start + x.len() - 1]`, by the band
    /// rule. The result lives on the support widened by `w` on each side.
    pub fn apply(&self, x: &[Complex64], start: i64) -> (Interval, Vec<Complex64>) {
        let w = self.half_width as i64;
        let len = x.len() as i64;
        let out = Interval {
            lo: start - w,
            hi: start + len - 1 + w,
        };
        let y = out
            .iter()
            .map(|i| {
                (-w..=w)
                    .filter_map(|j| {
                        let k = i - j;
                        (start..start + len)
                            .contains(&k)
                            .then(|| self.diagonals[(j + w) as usize].value_at(i) * x[(k - start) as usize])
                    })
                    .sum()
            })
            .collect();
        (out, y)
    }

    /// `sum_j sup |b_j|`: over the alphabet when finite, otherwise over
    /// `window`. Bounds the norm of every section inside the window.
    pub fn upper_bound(&self, window: Interval) -> f64 {
        self.diagonals
            .iter()
            .map(|b| match b.alphabet() {
                Some(a) => a.symbols().iter().map(|z| z.norm()).fold(0.0, f64::max),
                None => b.window_of(window).iter().map(|z| z.norm()).fold(0.0, f64::max),
            })
            .sum()
    }

    /// Column encoding over the vector alphabet of the varying diagonals.
    pub fn encode_columns(&self) -> Result<ColumnEncoding> {
        let w = self.half_width as i64;
        let mut varying = Vec::new();
        for j in -w..=w {
            let b = &self.diagonals[(j + w) as usize];
            if b.alphabet().is_none() {
                return Err(Error::NonFiniteAlphabet);
            }
            if b.constant_value().is_none() {
                varying.push(j);
            }
        }
        Ok(ColumnEncoding {
            operator: self.clone(),
            varying,
        })
    }
}

fn hermitian_by_construction(diagonals: &[Sequence], w: usize) -> bool {
    if !diagonals[w].is_real() {
        return false;
    }
    (1..=w).all(|j| {
        match (diagonals[w + j].constant_value(), diagonals[w - j].constant_value()) {
            (Some(a), Some(b)) => a == b.conj(),
            _ => false,
        }
    })
}

/// Column `k` of `A` restricted to its varying diagonals: `(b_j(k + j))_j`.
/// Two windows of columns with equal encodings have identical sections.
#[derive(Debug, Clone)]
pub struct ColumnEncoding {
    operator: BandOperator,
    varying: Vec<i64>,
}

/// Exact identity of one encoded column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnSymbol(Vec<(u64, u64)>);

impl ColumnEncoding {
    pub fn varying_diagonals(&self) -> &[i64] {
        &self.varying
    }

    pub fn column(&self, k: i64) -> Vec<Complex64> {
        self.varying
            .iter()
            .map(|&j| self.operator.diagonal(j).expect("in band").value_at(k + j))
            .collect()
    }

    /// Column symbols for `k` in `cols`.
    pub fn symbols(&self, cols: Interval) -> Vec<ColumnSymbol> {
        let windows: Vec<Vec<Complex64>> = self
            .varying
            .iter()
            .map(|&j| {
                self.operator
                    .diagonal(j)
                    .expect("in band")
                    .window(cols.lo + j, cols.hi + j)
            })
            .collect();
        (0..cols.len() as usize)
            .map(|t| ColumnSymbol(windows.iter().map(|v| symbol_key(v[t])).collect()))
            .collect()
    }

    /// Number of distinct column vectors over the union of the diagonal alphabets.
    pub fn alphabet_size(&self) -> usize {
        self.varying
            .iter()
            .map(|&j| {
                self.operator
                    .diagonal(j)
                    .and_then(Sequence::alphabet)
                    .map_or(1, |a| a.len())
            })
            .product()
    }

    /// Distinct length-`len` column words fully inside `cols`.
    pub fn factors(&self, cols: Interval, len: usize) -> Result<Vec<Vec<ColumnSymbol>>> {
        if len == 0 || (cols.len() as usize) < len {
            return Err(Error::WindowTooShort {
                lo: cols.lo,
                hi: cols.hi,
                needed: len as u64,
            });
        }
        let symbols = self.symbols(cols);
        let mut ids = HashMap::new();
        let id: Vec<usize> = symbols
            .iter()
            .map(|s| {
                let next = ids.len();
                *ids.entry(s.clone()).or_insert(next)
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (t, f) in id.windows(len).enumerate() {
            if seen.insert(f) {
                out.push(symbols[t..t + len].to_vec());
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Dense rectangular section `(a_{i,k})` for `i` in `rows`, `k` in `cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSection {
    pub rows: Interval,
    pub cols: Interval,
    entries: Vec<Complex64>,
}

impl FiniteSection {
    pub fn from_matrix(rows: Interval, cols: Interval, m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() as u64 != rows.len() || m.ncols() as u64 != cols.len() {
            return Err(Error::InvalidParameter("matrix shape does not match ranges".into()));
        }
        let entries = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| m[(r, c)]))
            .collect();
        Ok(FiniteSection { rows, cols, entries })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len() as usize
    }

    pub fn ncols(&self) -> usize {
        self.cols.len() as usize
    }

    /// Entry at absolute indices `(i, k)`.
    pub fn get(&self, i: i64, k: i64) -> Complex64 {
        let (r, c) = ((i - self.rows.lo) as usize, (k - self.cols.lo) as usize);
        self.entries[r * self.ncols() + c]
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.nrows(), self.ncols(), &self.entries)
    }

    pub fn conjugate_transpose(&self) -> FiniteSection {
        let m = self.to_matrix().adjoint();
        FiniteSection::from_matrix(self.cols, self.rows, &m).expect("shape")
    }

    /// Dense row-major CSV. Complex entries are written as `re+imi`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols())
                .map(|c| format_scalar(self.entries[r * self.ncols() + c]))
                .collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

impl Serialize for FiniteSection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let real = self.is_real();
        let rows: Vec<Vec<serde_json::Value>> = (0..self.nrows())
            .map(|r| {
                (0..self.ncols())
                    .map(|c| {
                        let z = self.entries[r * self.ncols() + c];
                        if real {
                            serde_json::json!(z.re)
                        } else {
                            serde_json::json!([z.re, z.im])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut st = serializer.serialize_struct("FiniteSection", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

/// 17 significant digits, round-trip safe.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_scalar(z: Complex64) -> String {
    if z.im == 0.0 {
        format_real(z.re)
    } else {
        let sign = if z.im.is_sign_negative() { "-" } else { "+" };
        format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[0, inf)`
    Plus,
    /// `(-inf, -1]`
    Minus,
}

impl Side {
    pub fn domain(&self) -> Interval {
        match self {
            Side::Plus => Interval { lo: 0, hi: i64::MAX },
            Side::Minus => Interval { lo: i64::MIN, hi: -1 },
        }
    }
}

/// Compression `P A P` of a band operator to one half-line.
#[derive(Debug, Clone)]
pub struct HalfLineOperator {
    base: BandOperator,
    side: Side,
}

impl HalfLineOperator {
    pub fn new(base: BandOperator, side: Side) -> Self {
        HalfLineOperator { base, side }
    }

    pub fn base(&self) -> &BandOperator {
        &self.base
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn adjoint(&self) -> HalfLineOperator {
        HalfLineOperator::new(self.base.adjoint(), self.side)
    }

    /// Section with the ranges clipped to the half-line.
    pub fn section(&self, rows: Interval, cols: Interval) -> Result<FiniteSection> {
        let d = self.side.domain();
        let clip = |r: Interval| {
            let (lo, hi) = (r.lo.max(d.lo), r.hi.min(d.hi));
            if lo > hi {
                Err(Error::EmptyRange { lo: r.lo, hi: r.hi })
            } else {
                Ok(Interval { lo, hi })
            }
        };
        self.base.section(clip(rows)?, clip(cols)?)
    }

    /// The `N x N` section adjacent to the cut: `[0, N-1]` or `[-N, -1]`.
    pub fn leading_section(&self, size: usize) -> Result<FiniteSection> {
        if size == 0 {
            return Err(Error::InvalidParameter("section size must be positive".into()));
        }
        let r = match self.side {
            Side::Plus => Interval::right_half(size as u64)?,
            Side::Minus => Interval::left_half(size as u64)?,
        };
        self.base.section(r, r)
    }
}
