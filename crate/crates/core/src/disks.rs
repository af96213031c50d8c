//! Index-one disks in nice diagrams and the J₊ splitting of the
//! differential.
//!
//! In a nice, admissible diagram every positive index-one domain avoiding
//! the basepoints is an empty embedded bigon or rectangle, so the search
//! only has to visit 0/1 domains whose local picture at each intersection
//! point is empty, full, a half-plane or a single corner.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{
    check_nice, enumerate_generators, Generator, HeegaardDiagram, NiceViolation, Quadrant,
};
use crate::domains::{self, euler_measure, maslov_index, n_x, Domain, DomainError};
use crate::f2::{BitMatrix, SparseColumns};
use crate::measure::Quarter;

#[derive(Debug, Error)]
pub enum DiskError {
    #[error("diagram is not nice: {}", .0.iter().map(|v| format!("{} (chi {}, {} corners)", v.region, v.chi, v.corners)).collect::<Vec<_>>().join(", "))]
    NotNice(Vec<NiceViolation>),
    #[error("diagram is not admissible: a nonnegative periodic domain avoids every basepoint")]
    NotAdmissible,
    #[error("Maslov index is {0}, expected 1")]
    NotIndexOne(Quarter),
    #[error("J+ = {0} is not a nonnegative even integer")]
    BadJPlus(String),
    #[error("domain covers boundary region {0:?}")]
    CrossesSuture(String),
    #[error("convolution identity fails at level n = {0}")]
    Convolution(usize),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Bigon,
    Rectangle,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Bigon => "bigon",
            Shape::Rectangle => "rect",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountedDisk {
    pub from: Generator,
    pub to: Generator,
    pub domain: Domain,
    pub shape: Shape,
    pub j_plus: u32,
    /// Corner points, ordered along the α-curves.
    pub corners: Vec<usize>,
}

impl CountedDisk {
    /// Concatenated corner ids, e.g. `y1y2z1z2`.
    pub fn name(&self, d: &HeegaardDiagram) -> String {
        self.corners.iter().map(|&p| d.points[p].id.as_str()).collect()
    }

    /// Number of elementary regions covered.
    pub fn support_size(&self) -> usize {
        self.domain.coefficients.iter().filter(|&&c| c != 0).count()
    }
}

/// Local picture at a point: which quadrants carry coefficient 1.
/// Returns `Some(sign)` for a corner, `Some(0)` for empty, full or a
/// half-plane, and `None` for anything else.
fn local_pattern(bits: [bool; 4]) -> Option<i64> {
    let ones = bits.iter().filter(|&&b| b).count();
    match ones {
        0 | 4 => Some(0),
        1 => {
            let q = Quadrant::ALL[bits.iter().position(|&b| b).unwrap()];
            Some(q.alpha_boundary_sign())
        }
        2 => {
            let adjacent = (0..4).any(|i| bits[i] && bits[(i + 1) % 4]);
            adjacent.then_some(0)
        }
        _ => None,
    }
}

struct Search<'a> {
    d: &'a HeegaardDiagram,
    assign: Vec<Option<bool>>,
    plus: Vec<usize>,
    minus: Vec<usize>,
    found: Vec<(Vec<bool>, Vec<usize>, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, k: usize) {
        if k == self.d.points.len() {
            if !self.plus.is_empty() && self.plus.len() == self.minus.len() {
                let regions = self.assign.iter().map(|a| a.unwrap_or(false)).collect();
                self.found.push((regions, self.plus.clone(), self.minus.clone()));
            }
            return;
        }
        let quads = self.d.points[k].quadrants;
        let mut open: Vec<usize> = quads.iter().copied().filter(|&r| self.assign[r].is_none()).collect();
        open.sort_unstable();
        open.dedup();
        for mask in 0..(1u32 << open.len()) {
            for (i, &r) in open.iter().enumerate() {
                self.assign[r] = Some(mask >> i & 1 == 1);
            }
            let bits = quads.map(|r| self.assign[r] == Some(true));
            match local_pattern(bits) {
                Some(1) if self.plus.len() < 2 => {
                    self.plus.push(k);
                    self.run(k + 1);
                    self.plus.pop();
                }
                Some(-1) if self.minus.len() < 2 => {
                    self.minus.push(k);
                    self.run(k + 1);
                    self.minus.pop();
                }
                Some(0) => self.run(k + 1),
                _ => {}
            }
        }
        for &r in &open {
            self.assign[r] = None;
        }
    }
}

fn point_order(d: &HeegaardDiagram) -> HashMap<usize, (usize, usize)> {
    let mut order = HashMap::new();
    for (a, word) in d.alpha.iter().enumerate() {
        for (i, &p) in word.iter().enumerate() {
            order.insert(p, (a, i));
        }
    }
    order
}

/// All empty embedded bigons and rectangles, sorted by
/// `(from, to, domain)`.
pub fn enumerate_disks(d: &HeegaardDiagram) -> Result<Vec<CountedDisk>, DiskError> {
    let bad = check_nice(d);
    if !bad.is_empty() {
        return Err(DiskError::NotNice(bad));
    }
    if !domains::check_admissible(d) {
        return Err(DiskError::NotAdmissible);
    }
    let assign = d.regions.iter().map(|r| if r.is_free() { None } else { Some(false) }).collect();
    let mut search = Search { d, assign, plus: Vec::new(), minus: Vec::new(), found: Vec::new() };
    search.run(0);

    let gens = enumerate_generators(d);
    let order = point_order(d);
    let mut disks = Vec::new();
    for (regions, plus, minus) in search.found {
        let support: Vec<usize> = (0..regions.len()).filter(|&r| regions[r]).collect();
        let domain = Domain::from_regions(d.regions.len(), &support);
        for x in gens.iter().filter(|x| plus.iter().all(|&p| x.contains(p))) {
            let mut pts: Vec<usize> = x.points.iter().copied().filter(|p| !plus.contains(p)).collect();
            pts.extend(&minus);
            let Ok(y) = Generator::from_points(d, &pts) else { continue };
            if maslov_index(d, &domain, x, &y)? != Quarter::ONE {
                continue;
            }
            let j = j_plus_index1(d, &domain, x, &y)?;
            let mut corners: Vec<usize> = plus.iter().chain(&minus).copied().collect();
            corners.sort_by_key(|p| order[p]);
            disks.push(CountedDisk {
                from: x.clone(),
                to: y,
                domain: domain.clone(),
                shape: if plus.len() == 1 { Shape::Bigon } else { Shape::Rectangle },
                j_plus: j,
                corners,
            });
        }
    }
    disks.sort_by(|a, b| (&a.from, &a.to, &a.domain).cmp(&(&b.from, &b.to, &b.domain)));
    Ok(disks)
}

/// `2(n_x + n_y) − 1 + |x| − |y|` for an index-one domain from `x` to `y`.
pub fn j_plus_index1(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Result<u32, DiskError> {
    let mu = maslov_index(d, dom, x, y)?;
    if mu != Quarter::ONE {
        return Err(DiskError::NotIndexOne(mu));
    }
    let n = n_x(d, dom, x)? + n_x(d, dom, y)?;
    let j = n * 2 - Quarter::ONE + Quarter::from_int(x.cycles() as i64 - y.cycles() as i64);
    to_even_natural(j)
}

fn to_even_natural(j: Quarter) -> Result<u32, DiskError> {
    match j.to_integer() {
        Some(v) if v >= 0 && v % 2 == 0 => Ok(v as u32),
        _ => Err(DiskError::BadJPlus(j.to_string())),
    }
}

/// `n_x + n_y − e + |x| − |y|` for any domain in `D(x, y)` away from the
/// suture.
pub fn j_plus_general(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Result<i64, DiskError> {
    if dom.coefficients.len() == d.regions.len() {
        if let Some(r) = (0..d.regions.len()).find(|&r| d.regions[r].on_boundary && dom.coefficients[r] != 0) {
            return Err(DiskError::CrossesSuture(d.regions[r].id.clone()));
        }
    }
    domains::require_connecting(d, dom, x, y)?;
    let j = n_x(d, dom, x)? + n_x(d, dom, y)? - euler_measure(d, dom)?
        + Quarter::from_int(x.cycles() as i64 - y.cycles() as i64);
    j.to_integer().ok_or_else(|| DiskError::BadJPlus(j.to_string()))
}

/// `∂̂ = ∂₀ + ∂₁ + ⋯`, with `levels[r]` counting disks of `J₊ = 2r`.
/// Rows index targets, columns index sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDifferential {
    pub generators: Vec<Generator>,
    pub names: Vec<String>,
    pub levels: Vec<SparseColumns>,
}

impl SplitDifferential {
    pub fn from_disks(d: &HeegaardDiagram, generators: Vec<Generator>, disks: &[CountedDisk]) -> Self {
        let index: HashMap<&Generator, usize> = generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let n = generators.len();
        let top = disks.iter().map(|k| k.j_plus as usize / 2).max().unwrap_or(0);
        let mut levels = vec![SparseColumns::zeros(n, n); top + 1];
        for k in disks {
            levels[k.j_plus as usize / 2].flip(index[&k.to], index[&k.from]);
        }
        let names = generators.iter().map(|g| d.generator_name(g)).collect();
        SplitDifferential { generators, names, levels }
    }

    pub fn i_max(&self) -> usize {
        self.levels.len() - 1
    }

    /// The full mod-2 disk count matrix.
    pub fn total(&self) -> BitMatrix {
        let n = self.generators.len();
        let mut m = BitMatrix::zeros(n, n);
        for l in &self.levels {
            m.add_assign(&l.to_dense());
        }
        m
    }

    /// Smallest `n` with `Σ_{i+j=n} ∂_i ∂_j ≠ 0`, if any.
    pub fn convolution_failure(&self) -> Option<usize> {
        convolution_failure(&self.levels)
    }
}

pub(crate) fn convolution_failure(levels: &[SparseColumns]) -> Option<usize> {
    let dense: Vec<BitMatrix> = levels.iter().map(SparseColumns::to_dense).collect();
    let top = levels.len().saturating_sub(1);
    (0..=2 * top).find(|&n| {
        let Some(first) = dense.first() else { return false };
        let mut acc = BitMatrix::zeros(first.nrows(), first.ncols());
        for i in n.saturating_sub(top)..=n.min(top) {
            acc.add_assign(&dense[i].mul(&dense[n - i]).expect("square matrices"));
        }
        !acc.is_zero()
    })
}

pub fn split_differential(d: &HeegaardDiagram) -> Result<SplitDifferential, DiskError> {
    let disks = enumerate_disks(d)?;
    Ok(SplitDifferential::from_disks(d, enumerate_generators(d), &disks))
}
