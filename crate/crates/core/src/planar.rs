//! Exact subdivision of a convex polygon by straight chords.
//!
//! Coordinates are rationals, so intersection points, orders along chords
//! and angular orders at vertices are all decided exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Pt {
        Pt { x, y }
    }

    pub fn int(x: i64, y: i64) -> Pt {
        Pt::new(Q::from_integer(BigInt::from(x)), Q::from_integer(BigInt::from(y)))
    }

    fn sub(&self, o: &Pt) -> Pt {
        Pt::new(&self.x - &o.x, &self.y - &o.y)
    }

    fn lerp(&self, o: &Pt, t: &Q) -> Pt {
        Pt::new(&self.x + (&o.x - &self.x) * t, &self.y + (&o.y - &self.y) * t)
    }
}

pub fn cross(a: &Pt, b: &Pt) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

/// Counterclockwise angular order of direction vectors, starting at the
/// positive x-axis.
pub fn angle_cmp(a: &Pt, b: &Pt) -> Ordering {
    let half = |p: &Pt| -> u8 {
        if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanarError {
    #[error("chords {0} and {1} cross but are not allowed to")]
    ForbiddenCrossing(usize, usize),
    #[error("chords {0} and {1} meet in a degenerate way (shared point or overlap)")]
    Degenerate(usize, usize),
    #[error("three chords pass through one point")]
    Concurrent,
    #[error("boundary parameter must lie strictly between 0 and 1")]
    Parameter,
}

/// A point on side `side` of the polygon at parameter `t` along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub side: usize,
    pub t: Q,
}

#[derive(Clone, Debug)]
pub struct Chord {
    pub start: usize,
    pub end: usize,
    /// Chords of the same class may not cross.
    pub class: u8,
}

/// What a directed edge of the subdivision runs along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// Piece `piece` of polygon side `side`, counted from its start.
    Side { side: usize, piece: usize },
    /// Piece `piece` of chord `chord`, counted from its start.
    Chord { chord: usize, piece: usize, forward: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Corner(usize),
    Boundary(usize),
    /// Crossing of two chords, lower index first.
    Crossing(usize, usize),
}

/// A bounded face, traversed counterclockwise.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Vertex at the start of each side.
    pub vertices: Vec<usize>,
    pub sides: Vec<EdgeKind>,
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub coords: Vec<Pt>,
    pub kinds: Vec<VertexKind>,
    pub cells: Vec<Cell>,
    /// Crossing points along each chord, in order from its start.
    pub along: Vec<Vec<usize>>,
    /// Boundary points along each side, in order.
    pub on_side: Vec<Vec<usize>>,
    /// Vertex of each boundary point.
    pub boundary_vertex: Vec<usize>,
}

impl Subdivision {
    pub fn vertex_of(&self, kind: VertexKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    /// Cell whose boundary leaves `v` along `dir`.
    pub fn cell_leaving(&self, v: usize, dir: &Pt) -> Option<usize> {
        self.cells.iter().position(|c| {
            c.vertices.iter().enumerate().any(|(i, &u)| {
                if u != v {
                    return false;
                }
                let w = c.vertices[(i + 1) % c.vertices.len()];
                let d = self.coords[w].sub(&self.coords[v]);
                angle_cmp(&d, dir) == Ordering::Equal
            })
        })
    }

    pub fn direction(&self, from: usize, to: usize) -> Pt {
        self.coords[to].sub(&self.coords[from])
    }
}

/// Vertices of a convex polygon with `n` sides, counterclockwise.
pub fn convex_polygon(n: usize) -> Vec<Pt> {
    (0..n as i64).map(|k| Pt::int(k, k * k)).collect()
}

/// Parameter of the crossing of segments `p0p1` and `q0q1` along each,
/// or `None` when they miss. Touching or overlap counts as degenerate.
fn crossing(p0: &Pt, p1: &Pt, q0: &Pt, q1: &Pt) -> Result<Option<(Q, Q)>, ()> {
    let r = p1.sub(p0);
    let s = q1.sub(q0);
    let denom = cross(&r, &s);
    let qp = q0.sub(p0);
    if denom.is_zero() {
        return if cross(&qp, &r).is_zero() { Err(()) } else { Ok(None) };
    }
    let t = cross(&qp, &s) / &denom;
    let u = cross(&qp, &r) / &denom;
    let (zero, one) = (Q::zero(), Q::one());
    if t < zero || t > one || u < zero || u > one {
        return Ok(None);
    }
    if t == zero || t == one || u == zero || u == one {
        return Err(());
    }
    Ok(Some((t, u)))
}

pub fn subdivide(polygon: &[Pt], points: &[BoundaryPoint], chords: &[Chord]) -> Result<Subdivision, PlanarError> {
    let n = polygon.len();
    let (zero, one) = (Q::zero(), Q::one());
    let mut coords: Vec<Pt> = polygon.to_vec();
    let mut kinds: Vec<VertexKind> = (0..n).map(VertexKind::Corner).collect();
    let mut bp_vertex = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if p.t <= zero || p.t >= one {
            return Err(PlanarError::Parameter);
        }
        bp_vertex.push(coords.len());
        coords.push(polygon[p.side].lerp(&polygon[(p.side + 1) % n], &p.t));
        kinds.push(VertexKind::Boundary(i));
    }
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if coords[i] == coords[j] {
                return Err(PlanarError::Degenerate(i, j));
            }
        }
    }

    // crossings, with their parameters along both chords
    let mut along: Vec<Vec<(Q, usize)>> = vec![Vec::new(); chords.len()];
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (a, b) = (&chords[i], &chords[j]);
            let ends = [a.start, a.end, b.start, b.end];
            if ends[0] == ends[2] || ends[0] == ends[3] || ends[1] == ends[2] || ends[1] == ends[3] {
                return Err(PlanarError::Degenerate(i, j));
            }
            let (p0, p1) = (&coords[bp_vertex[a.start]], &coords[bp_vertex[a.end]]);
            let (q0, q1) = (&coords[bp_vertex[b.start]], &coords[bp_vertex[b.end]]);
            match crossing(p0, p1, q0, q1) {
                Err(()) => return Err(PlanarError::Degenerate(i, j)),
                Ok(None) => {}
                Ok(Some((t, u))) => {
                    if a.class == b.class {
                        return Err(PlanarError::ForbiddenCrossing(i, j));
                    }
                    let pt = p0.lerp(p1, &t);
                    if coords.contains(&pt) {
                        return Err(PlanarError::Concurrent);
                    }
                    let v = coords.len();
                    coords.push(pt);
                    kinds.push(VertexKind::Crossing(i, j));
                    along[i].push((t, v));
                    along[j].push((u, v));
                }
            }
        }
    }
    for a in along.iter_mut() {
        a.sort_by(|x, y| x.0.cmp(&y.0));
    }

    // undirected edges with their kinds, stored as directed pairs
    let mut out: BTreeMap<usize, Vec<(usize, EdgeKind)>> = BTreeMap::new();
    let mut add = |u: usize, v: usize, fwd: EdgeKind, back: EdgeKind| {
        out.entry(u).or_default().push((v, fwd));
        out.entry(v).or_default().push((u, back));
    };
    let mut on_side: Vec<Vec<(Q, usize)>> = vec![Vec::new(); n];
    for (i, p) in points.iter().enumerate() {
        on_side[p.side].push((p.t.clone(), bp_vertex[i]));
    }
    for s in on_side.iter_mut() {
        s.sort_by(|x, y| x.0.cmp(&y.0));
    }
    for (side, pts) in on_side.iter().enumerate() {
        let mut chain = vec![side];
        chain.extend(pts.iter().map(|(_, v)| *v));
        chain.push((side + 1) % n);
        for (piece, w) in chain.windows(2).enumerate() {
            let k = EdgeKind::Side { side, piece };
            add(w[0], w[1], k, k);
        }
    }
    for (c, ch) in chords.iter().enumerate() {
        let mut chain = vec![bp_vertex[ch.start]];
        chain.extend(along[c].iter().map(|(_, v)| *v));
        chain.push(bp_vertex[ch.end]);
        for (piece, w) in chain.windows(2).enumerate() {
            add(
                w[0],
                w[1],
                EdgeKind::Chord { chord: c, piece, forward: true },
                EdgeKind::Chord { chord: c, piece, forward: false },
            );
        }
    }
    for (v, list) in out.iter_mut() {
        let base = coords[*v].clone();
        list.sort_by(|a, b| angle_cmp(&coords[a.0].sub(&base), &coords[b.0].sub(&base)));
    }

    // face tracing, face on the left
    let mut seen: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut cells = Vec::new();
    for (&u0, list) in &out {
        for &(v0, _) in list {
            if seen.contains_key(&(u0, v0)) {
                continue;
            }
            let (mut u, mut v) = (u0, v0);
            let mut vertices = Vec::new();
            let mut sides = Vec::new();
            let mut area = Q::zero();
            loop {
                seen.insert((u, v), true);
                let kind = out[&u].iter().find(|e| e.0 == v).expect("edge").1;
                vertices.push(u);
                sides.push(kind);
                area += cross(&coords[u], &coords[v]);
                let at_v = &out[&v];
                let back = at_v.iter().position(|e| e.0 == u).expect("reverse edge");
                let next = at_v[(back + at_v.len() - 1) % at_v.len()].0;
                u = v;
                v = next;
                if (u, v) == (u0, v0) {
                    break;
                }
            }
            if area.is_positive() {
                cells.push(Cell { vertices, sides });
            }
        }
    }

    Ok(Subdivision {
        coords,
        kinds,
        cells,
        along: along.into_iter().map(|a| a.into_iter().map(|(_, v)| v).collect()).collect(),
        on_side: on_side.into_iter().map(|a| a.into_iter().map(|(_, v)| v).collect()).collect(),
        boundary_vertex: bp_vertex,
    })
}

pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (BigInt, BigInt) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            (!q.is_zero()).then(|| Q::new(p, q))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}
