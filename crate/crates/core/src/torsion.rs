//! Spectral sequence pages, boundary depth and algebraic torsion of the
//! EH class.
//!
//! `F_p` is levels `0..=p`. Since `∂̂` never raises the level, every space
//! involved in `E^r_p` lives inside `F_{p + max(r − 1, 0)}` and all
//! computations are exact finite F2 elimination.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Element, FilteredComplex};
use crate::f2::{span_rank, BitMatrix, BitVec};
use crate::poly::Series;

#[derive(Debug, Error)]
pub enum TorsionError {
    #[error("complex has no EH generator")]
    NoEh,
    #[error("malformed input: EH is not a cycle of the J+ = 0 differential")]
    EhNotCycle,
    #[error("internal check failed: the two boundary-depth backends disagree at k = {0}")]
    BackendDisagreement(usize),
    #[error("internal check failed: certificate does not reproduce EH")]
    CertificateRejected,
}

/// `∂̂` restricted to `F_q`, as a square matrix on levels `0..=q`.
/// Index `level·n + g`.
pub fn total_matrix(fc: &FilteredComplex, q: usize) -> BitMatrix {
    let n = fc.dim();
    let size = n * (q + 1);
    let mut rows = vec![BitVec::zeros(size); size];
    for (r, m) in fc.levels.iter().enumerate() {
        for level in r..=q {
            let target = level - r;
            for g in 0..n {
                for &i in m.column(g) {
                    rows[target * n + i].flip(level * n + g);
                }
            }
        }
    }
    BitMatrix::from_rows(size, rows)
}

fn pad(v: &BitVec, len: usize) -> BitVec {
    BitVec::from_indices(len, v.ones())
}

/// Kernel of the rows of `t` at levels `lo..=hi`, as vectors of `F_q`.
fn level_kernel(t: &BitMatrix, n: usize, lo: usize, hi: usize) -> Vec<BitVec> {
    let size = t.ncols();
    if lo > hi {
        return (0..size).map(|i| BitVec::unit(size, i)).collect();
    }
    let rows: Vec<BitVec> = (lo * n..(hi + 1) * n).map(|i| t.row(i).clone()).collect();
    BitMatrix::from_rows(size, rows).kernel_basis()
}

/// `Z^s_q = {x ∈ F_q : ∂̂x ∈ F_{q−s}}`, padded to length `len`.
fn z_space(fc: &FilteredComplex, s: isize, q: isize, len: usize) -> Vec<BitVec> {
    if q < 0 {
        return Vec::new();
    }
    let n = fc.dim();
    let t = total_matrix(fc, q as usize);
    let lo = (q - s + 1).max(0) as usize;
    level_kernel(&t, n, lo, q as usize).iter().map(|v| pad(v, len)).collect()
}

/// `B^s_p = F_p ∩ ∂̂F_{p+s}`, padded to length `len`.
fn b_space(fc: &FilteredComplex, s: isize, p: usize, len: usize) -> Vec<BitVec> {
    let top = p as isize + s;
    if top < 0 {
        return Vec::new();
    }
    let top = top as usize;
    let n = fc.dim();
    let t = total_matrix(fc, top);
    level_kernel(&t, n, p + 1, top)
        .iter()
        .map(|k| pad(&t.mul_vec(k).expect("square"), len))
        .collect()
}

/// `dim E^r_p = dim Z^r_p / (Z^{r−1}_{p−1} + B^{r−1}_p)`.
pub fn page_dimension(fc: &FilteredComplex, r: usize, p: usize) -> usize {
    let n = fc.dim();
    let len = n * (p + r.saturating_sub(1) + 1);
    let (r, pi) = (r as isize, p as isize);
    let z = z_space(fc, r, pi, len);
    let mut den = z_space(fc, r - 1, pi - 1, len);
    den.extend(b_space(fc, r - 1, p, len));
    let den_rank = span_rank(len, &den);
    den.extend(z);
    span_rank(len, &den) - den_rank
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub r: usize,
    pub p: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PageTable {
    pub entries: Vec<PageEntry>,
}

impl PageTable {
    pub fn get(&self, r: usize, p: usize) -> Option<usize> {
        self.entries.iter().find(|e| e.r == r && e.p == p).map(|e| e.dim)
    }
}

pub fn page_table(fc: &FilteredComplex, r_max: usize, p_max: usize) -> PageTable {
    let mut entries = Vec::new();
    for r in 0..=r_max {
        for p in 0..=p_max {
            entries.push(PageEntry { r, p, dim: page_dimension(fc, r, p) });
        }
    }
    PageTable { entries }
}

/// Decides `class ∈ B^k_0`: returns `(c₀, …, c_k)` with
/// `∂̂(c₀, …, c_k) = (class, 0, …, 0)` when it is.
pub fn in_boundary_depth(fc: &FilteredComplex, class: &BitVec, k: usize) -> Option<Element> {
    let n = fc.dim();
    let t = total_matrix(fc, k);
    let rhs = pad(class, n * (k + 1));
    let sol = t.solve(&rhs).expect("square system")?;
    let levels = (0..=k).map(|i| sol.slice(i * n, n)).collect();
    Some(Element::from_levels(n, levels))
}

/// Smallest `k` with `class ∈ B^k_0`, or `None` when there is none.
///
/// With `D(u) = Σ_i ∂_i u^i`, `class ∈ B^k_0` iff `class·u^k` lies in
/// `im D(u) + u^{k+1}` over `F2[[u]]`. Diagonalising `D(u)` by invertible
/// row and column operations and carrying `class` through the row
/// operations reduces this to one valuation comparison per coordinate.
/// Nonzero diagonal valuations are at most `n·I_max`, so working modulo
/// `u^{n·I_max + 2}` is exact.
pub fn boundary_threshold(fc: &FilteredComplex, class: &BitVec) -> Option<usize> {
    let n = fc.dim();
    let prec = n * fc.i_max() + 2;
    let mut m: Vec<Vec<Series>> = vec![vec![Series::zero(prec); n]; n];
    for (r, level) in fc.levels.iter().enumerate() {
        for g in 0..n {
            for &i in level.column(g) {
                m[i][g].add_assign(&Series::monomial(prec, r));
            }
        }
    }
    let mut w: Vec<Series> = (0..n).map(|i| if class.get(i) { Series::one(prec) } else { Series::zero(prec) }).collect();
    let mut diag = Vec::new();
    for t in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for i in t..n {
            for j in t..n {
                if let Some(v) = m[i][j].valuation() {
                    if best.map_or(true, |b| v < b.2) {
                        best = Some((i, j, v));
                        if v == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((pi, pj, a)) = best else { break };
        m.swap(t, pi);
        w.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let inv = m[t][t].shifted_right(a).inverse().expect("pivot has minimal valuation");
        let pivot_row = m[t].clone();
        let wt = w[t].clone();
        for i in t + 1..n {
            if m[i][t].is_zero() {
                continue;
            }
            let f = m[i][t].shifted_right(a).mul(&inv);
            for j in t..n {
                if !pivot_row[j].is_zero() {
                    let prod = f.mul(&pivot_row[j]);
                    m[i][j].add_assign(&prod);
                }
            }
            w[i].add_assign(&f.mul(&wt));
        }
        // column operations clear the rest of row t and leave w untouched
        for j in t + 1..n {
            m[t][j] = Series::zero(prec);
        }
        diag.push(a);
    }
    let mut threshold = 0;
    for (i, wi) in w.iter().enumerate() {
        if !wi.is_unit() {
            continue;
        }
        threshold = threshold.max(*diag.get(i)?);
    }
    Some(threshold)
}

/// True iff EH survives every page: `eh ∉ ⋃_k B^k_0`.
pub fn decide_infinity(fc: &FilteredComplex) -> Result<bool, TorsionError> {
    let eh = fc.eh_vector().ok_or(TorsionError::NoEh)?;
    Ok(boundary_threshold(fc, &eh).is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtValue {
    Finite(usize),
    Undetermined { at_least: usize },
    Infinite,
}

impl std::fmt::Display for AtValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtValue::Finite(k) => write!(f, "{k}"),
            AtValue::Undetermined { at_least } => write!(f, ">= {at_least} (undetermined)"),
            AtValue::Infinite => write!(f, "infinity"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AtOptions {
    pub cap: usize,
    /// Resolve finite values beyond the cap instead of reporting them as
    /// undetermined.
    pub exact: bool,
    /// Page window `(r_max, p_max)`.
    pub pages: (usize, usize),
}

impl Default for AtOptions {
    fn default() -> Self {
        AtOptions { cap: 64, exact: false, pages: (3, 2) }
    }
}

#[derive(Clone, Debug)]
pub struct AtReport {
    pub value: AtValue,
    pub witness: Option<Element>,
    pub pages: PageTable,
    pub cap: usize,
    /// Whether the stacked-system backend was also run at the cap to
    /// confirm a non-finite answer (skipped for very large systems).
    pub cross_checked: bool,
}

/// Largest stacked system solved only for cross-checking.
const CROSS_CHECK_LIMIT: usize = 2048;

/// `AT` of the EH class for this presentation: the least `k` with
/// `eh ∈ B^k_0`.
pub fn algebraic_torsion(fc: &FilteredComplex, opts: &AtOptions) -> Result<AtReport, TorsionError> {
    let eh = fc.eh_vector().ok_or(TorsionError::NoEh)?;
    if !fc.apply_level(0, &eh).is_zero() {
        return Err(TorsionError::EhNotCycle);
    }
    let threshold = boundary_threshold(fc, &eh);
    let pages = page_table(fc, opts.pages.0, opts.pages.1);
    let n = fc.dim();
    let (value, witness, cross_checked) = match threshold {
        Some(t) if t <= opts.cap || opts.exact => {
            let w = in_boundary_depth(fc, &eh, t).ok_or(TorsionError::BackendDisagreement(t))?;
            if t > 0 && in_boundary_depth(fc, &eh, t - 1).is_some() {
                return Err(TorsionError::BackendDisagreement(t - 1));
            }
            if fc.apply_total(&w) != Element::at_level(n, 0, eh.clone()) {
                return Err(TorsionError::CertificateRejected);
            }
            (AtValue::Finite(t), Some(w), true)
        }
        other => {
            let check = n * (opts.cap + 1) <= CROSS_CHECK_LIMIT;
            if check && in_boundary_depth(fc, &eh, opts.cap).is_some() {
                return Err(TorsionError::BackendDisagreement(opts.cap));
            }
            let value = if other.is_none() { AtValue::Infinite } else { AtValue::Undetermined { at_least: opts.cap + 1 } };
            (value, None, check)
        }
    };
    Ok(AtReport { value, witness, pages, cap: opts.cap, cross_checked })
}
