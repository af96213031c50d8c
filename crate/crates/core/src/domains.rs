//! Integer domains on a diagram: boundaries, Euler and point measures,
//! Maslov index, connecting-domain lattices, periodic domains and
//! admissibility.
//!
//! Boundary sign convention: at a point `p` the α-boundary coefficient of a
//! domain is `c_NW + c_SE − c_NE − c_SW`, so a domain in `D(x, y)` has
//! α-boundary `x − y`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{CurveKind, Generator, HeegaardDiagram, Quadrant, Region};
use crate::measure::Quarter;
use crate::zlinalg::{self, IntegerSolveError, Row};

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("unknown region {0:?}")]
    UnknownRegion(String),
    #[error("domain has {got} coefficients, diagram has {expected} regions")]
    WrongLength { expected: usize, got: usize },
    #[error("unknown point index {0}")]
    UnknownPoint(usize),
    #[error("domain does not connect {from} to {to}")]
    NotConnecting { from: String, to: String },
    #[error("domain covers boundary region {0:?}")]
    CrossesSuture(String),
    #[error(transparent)]
    Integer(#[from] IntegerSolveError),
}

/// Integer combination of regions, indexed like `HeegaardDiagram::regions`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    pub coefficients: Vec<i64>,
}

impl Domain {
    pub fn zero(regions: usize) -> Domain {
        Domain { coefficients: vec![0; regions] }
    }

    pub fn from_regions(regions: usize, support: &[usize]) -> Domain {
        let mut d = Domain::zero(regions);
        for &r in support {
            d.coefficients[r] += 1;
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn get(&self, r: usize) -> i64 {
        self.coefficients[r]
    }

    pub fn add(&self, other: &Domain) -> Domain {
        Domain { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Domain) -> Domain {
        Domain { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: i64) -> Domain {
        Domain { coefficients: self.coefficients.iter().map(|a| a * k).collect() }
    }

    /// Sparse form keyed by region id; zero coefficients are omitted.
    pub fn to_map(&self, d: &HeegaardDiagram) -> BTreeMap<String, i64> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| (d.regions[r].id.clone(), c))
            .collect()
    }

    pub fn from_map(d: &HeegaardDiagram, map: &BTreeMap<String, i64>) -> Result<Domain, DomainError> {
        let mut out = Domain::zero(d.regions.len());
        for (id, &c) in map {
            let r = d.region(id).ok_or_else(|| DomainError::UnknownRegion(id.clone()))?;
            out.coefficients[r] += c;
        }
        Ok(out)
    }
}

/// Signed point multiset; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointChain(pub BTreeMap<usize, i64>);

impl PointChain {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_point(&mut self, p: usize, k: i64) {
        let e = self.0.entry(p).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    /// `x − y`.
    pub fn difference(x: &Generator, y: &Generator) -> PointChain {
        let mut c = PointChain::default();
        for &p in &x.points {
            c.add_point(p, 1);
        }
        for &p in &y.points {
            c.add_point(p, -1);
        }
        c
    }

    pub fn negate(&self) -> PointChain {
        PointChain(self.0.iter().map(|(&p, &k)| (p, -k)).collect())
    }

    pub fn render(&self, d: &HeegaardDiagram) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (&p, &k)) in self.0.iter().enumerate() {
            let sign = if k < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = k.abs();
            if i > 0 {
                s.push(' ');
            }
            s.push_str(sign);
            if i > 0 && !sign.is_empty() {
                s.push(' ');
            }
            if mag != 1 {
                s.push_str(&mag.to_string());
            }
            s.push_str(&d.points[p].id);
        }
        s
    }
}

fn check_len(d: &HeegaardDiagram, dom: &Domain) -> Result<(), DomainError> {
    if dom.coefficients.len() != d.regions.len() {
        return Err(DomainError::WrongLength { expected: d.regions.len(), got: dom.coefficients.len() });
    }
    Ok(())
}

pub fn region_euler_measure(r: &Region) -> Quarter {
    Quarter::from_quarters(4 * r.chi - r.corners.len() as i64)
}

pub fn euler_measure(d: &HeegaardDiagram, dom: &Domain) -> Result<Quarter, DomainError> {
    check_len(d, dom)?;
    Ok(d.regions.iter().zip(&dom.coefficients).map(|(r, &c)| region_euler_measure(r) * c).sum())
}

/// Average of the four quadrant coefficients at `p`.
pub fn point_measure(d: &HeegaardDiagram, dom: &Domain, p: usize) -> Result<Quarter, DomainError> {
    check_len(d, dom)?;
    let pt = d.points.get(p).ok_or(DomainError::UnknownPoint(p))?;
    Ok(Quarter::from_quarters(pt.quadrants.iter().map(|&r| dom.coefficients[r]).sum()))
}

pub fn n_x(d: &HeegaardDiagram, dom: &Domain, x: &Generator) -> Result<Quarter, DomainError> {
    x.points.iter().map(|&p| point_measure(d, dom, p)).sum()
}

fn alpha_coefficient(d: &HeegaardDiagram, dom: &Domain, p: usize) -> i64 {
    Quadrant::ALL.iter().map(|&q| q.alpha_boundary_sign() * dom.coefficients[d.points[p].region(q)]).sum()
}

/// `∂(∂D ∩ α)` or `∂(∂D ∩ β)`. The β-chain is the negative of the α-chain
/// since `∂∂D = 0`.
pub fn domain_boundary(d: &HeegaardDiagram, dom: &Domain, kind: CurveKind) -> Result<PointChain, DomainError> {
    check_len(d, dom)?;
    let mut c = PointChain::default();
    for p in 0..d.points.len() {
        c.add_point(p, alpha_coefficient(d, dom, p));
    }
    Ok(match kind {
        CurveKind::Alpha => c,
        CurveKind::Beta => c.negate(),
    })
}

/// Regions that domains may use: everything away from the suture.
fn interior_regions(d: &HeegaardDiagram) -> Vec<usize> {
    (0..d.regions.len()).filter(|&r| !d.regions[r].on_boundary).collect()
}

/// Rows: one α-boundary equation per point. Columns: the given regions.
fn boundary_system(d: &HeegaardDiagram, cols: &[usize]) -> Vec<Row> {
    let mut rows: Vec<Row> = vec![vec![0; cols.len()]; d.points.len()];
    let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(j, &r)| (r, j)).collect();
    for (p, pt) in d.points.iter().enumerate() {
        for q in Quadrant::ALL {
            if let Some(&j) = pos.get(&pt.region(q)) {
                rows[p][j] += q.alpha_boundary_sign();
            }
        }
    }
    rows
}

fn lift(d: &HeegaardDiagram, cols: &[usize], v: &[i64]) -> Domain {
    let mut dom = Domain::zero(d.regions.len());
    for (&r, &c) in cols.iter().zip(v) {
        dom.coefficients[r] = c;
    }
    dom
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectingDomains {
    pub particular: Domain,
    pub periodic_basis: Vec<Domain>,
}

/// The lattice `D(x, y)` of domains away from the suture, or `None` when no
/// integer domain connects `x` to `y`.
pub fn connecting_domains(
    d: &HeegaardDiagram,
    x: &Generator,
    y: &Generator,
) -> Result<Option<ConnectingDomains>, DomainError> {
    let cols = interior_regions(d);
    let rows = boundary_system(d, &cols);
    let target = PointChain::difference(x, y);
    let b: Vec<i64> = (0..d.points.len()).map(|p| target.0.get(&p).copied().unwrap_or(0)).collect();
    Ok(zlinalg::solve_integer(&rows, cols.len(), &b)?.map(|s| ConnectingDomains {
        particular: lift(d, &cols, &s.particular),
        periodic_basis: s.kernel.iter().map(|k| lift(d, &cols, k)).collect(),
    }))
}

/// `e(D) + n_x(D) + n_y(D)` for `D ∈ D(x, y)`.
pub fn maslov_index(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Result<Quarter, DomainError> {
    require_connecting(d, dom, x, y)?;
    Ok(euler_measure(d, dom)? + n_x(d, dom, x)? + n_x(d, dom, y)?)
}

pub(crate) fn require_connecting(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Result<(), DomainError> {
    if domain_boundary(d, dom, CurveKind::Alpha)? != PointChain::difference(x, y) {
        return Err(DomainError::NotConnecting { from: d.generator_name(x), to: d.generator_name(y) });
    }
    Ok(())
}

/// Basis of the periodic domains away from the suture.
pub fn periodic_domains(d: &HeegaardDiagram) -> Result<Vec<Domain>, DomainError> {
    let cols = interior_regions(d);
    let rows = boundary_system(d, &cols);
    Ok(zlinalg::integer_kernel(&rows, cols.len())?.iter().map(|k| lift(d, &cols, k)).collect())
}

/// True iff no nonzero periodic domain avoiding basepoints and the suture is
/// nonnegative everywhere. Decided as infeasibility of
/// `{P ≥ 0, ∂P = 0, ΣP = 1}` over the free regions.
pub fn check_admissible(d: &HeegaardDiagram) -> bool {
    let cols: Vec<usize> = (0..d.regions.len()).filter(|&r| d.regions[r].is_free()).collect();
    if cols.is_empty() {
        return true;
    }
    let mut rows = boundary_system(d, &cols);
    let mut b = vec![0; rows.len()];
    rows.push(vec![1; cols.len()]);
    b.push(1);
    !zlinalg::nonnegative_feasible(&rows, cols.len(), &b)
}
