//! Diagrams from curve words and crossing directions.
//!
//! A collection of α and β words together with the direction in which β
//! crosses α at each point is a 4-regular graph with a rotation system.
//! Tracing its faces yields a closed surface on which every complementary
//! region is a disk; regions can then be punctured (turned into boundary
//! annuli) or given basepoints.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{DiagramSpec, PointSpec, Quadrant, QuadrantsSpec, RegionSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("point {0:?} must occur exactly once on α and once on β")]
    Occurrence(String),
    #[error("curve {0} has no points")]
    EmptyCurve(String),
    #[error("face decoration list has {got} entries, map has {expected} faces")]
    Decorations { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfEdge {
    AlphaPlus,
    BetaPlus,
    AlphaMinus,
    BetaMinus,
}

impl HalfEdge {
    pub fn is_alpha(self) -> bool {
        matches!(self, HalfEdge::AlphaPlus | HalfEdge::AlphaMinus)
    }
}

/// A half-edge leaving `point`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub point: usize,
    pub out: HalfEdge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMap {
    pub names: Vec<String>,
    pub alpha: Vec<Vec<usize>>,
    pub beta: Vec<Vec<usize>>,
    /// Whether β crosses α towards the left of α at each point.
    pub beta_north: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
    /// Corner at the start of each dart.
    pub corners: Vec<(usize, Quadrant)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FaceDecoration {
    pub basepoints: u32,
    pub punctured: bool,
}

struct Positions {
    alpha: Vec<(usize, usize)>,
    beta: Vec<(usize, usize)>,
}

impl CurveMap {
    fn positions(&self) -> Result<Positions, MapError> {
        let n = self.names.len();
        let mut alpha = vec![None; n];
        let mut beta = vec![None; n];
        for (words, slot, kind) in [(&self.alpha, &mut alpha, "α"), (&self.beta, &mut beta, "β")] {
            for (c, w) in words.iter().enumerate() {
                if w.is_empty() {
                    return Err(MapError::EmptyCurve(format!("{kind}{c}")));
                }
                for (i, &p) in w.iter().enumerate() {
                    if slot[p].replace((c, i)).is_some() {
                        return Err(MapError::Occurrence(self.names[p].clone()));
                    }
                }
            }
        }
        let unwrap = |v: Vec<Option<(usize, usize)>>| -> Result<Vec<(usize, usize)>, MapError> {
            v.into_iter().enumerate().map(|(p, x)| x.ok_or_else(|| MapError::Occurrence(self.names[p].clone()))).collect()
        };
        Ok(Positions { alpha: unwrap(alpha)?, beta: unwrap(beta)? })
    }

    /// Counterclockwise order of the half-edges at `p`; sector `j` lies
    /// between entries `j` and `j + 1` and is `Quadrant::ALL[j]`.
    fn rotation(&self, p: usize) -> [HalfEdge; 4] {
        if self.beta_north[p] {
            [HalfEdge::AlphaPlus, HalfEdge::BetaPlus, HalfEdge::AlphaMinus, HalfEdge::BetaMinus]
        } else {
            [HalfEdge::AlphaPlus, HalfEdge::BetaMinus, HalfEdge::AlphaMinus, HalfEdge::BetaPlus]
        }
    }

    /// Endpoint of a dart and the half-edge through which it arrives.
    fn follow(&self, pos: &Positions, d: Dart) -> (usize, HalfEdge) {
        let step = |words: &Vec<Vec<usize>>, (c, i): (usize, usize), fwd: bool| {
            let w = &words[c];
            if fwd {
                w[(i + 1) % w.len()]
            } else {
                w[(i + w.len() - 1) % w.len()]
            }
        };
        match d.out {
            HalfEdge::AlphaPlus => (step(&self.alpha, pos.alpha[d.point], true), HalfEdge::AlphaMinus),
            HalfEdge::AlphaMinus => (step(&self.alpha, pos.alpha[d.point], false), HalfEdge::AlphaPlus),
            HalfEdge::BetaPlus => (step(&self.beta, pos.beta[d.point], true), HalfEdge::BetaMinus),
            HalfEdge::BetaMinus => (step(&self.beta, pos.beta[d.point], false), HalfEdge::BetaPlus),
        }
    }

    /// Faces with the face on the left of every dart, in a deterministic
    /// order.
    pub fn faces(&self) -> Result<Vec<Face>, MapError> {
        let pos = self.positions()?;
        let all = [HalfEdge::AlphaPlus, HalfEdge::BetaPlus, HalfEdge::AlphaMinus, HalfEdge::BetaMinus];
        let mut seen: BTreeMap<Dart, bool> = BTreeMap::new();
        let mut faces = Vec::new();
        for p in 0..self.names.len() {
            for h in all {
                let start = Dart { point: p, out: h };
                if seen.contains_key(&start) {
                    continue;
                }
                let mut darts = Vec::new();
                let mut corners = Vec::new();
                let mut d = start;
                loop {
                    seen.insert(d, true);
                    darts.push(d);
                    let j = self.rotation(d.point).iter().position(|&x| x == d.out).unwrap();
                    corners.push((d.point, Quadrant::ALL[j]));
                    let (w, h_in) = self.follow(&pos, d);
                    let rot = self.rotation(w);
                    let j_in = rot.iter().position(|&x| x == h_in).unwrap();
                    d = Dart { point: w, out: rot[(j_in + 3) % 4] };
                    if d == start {
                        break;
                    }
                }
                faces.push(Face { darts, corners });
            }
        }
        Ok(faces)
    }

    /// Pushes a finger of β from the edge of dart `s` across the α-edge of
    /// dart `t`, both on the boundary of one face. Adds two points joined
    /// by a new bigon.
    pub fn finger_move(&mut self, s: Dart, t: Dart, names: [String; 2]) -> Result<(), MapError> {
        assert!(!s.out.is_alpha() && t.out.is_alpha(), "s must be a β-dart and t an α-dart");
        let pos = self.positions()?;
        let (pa, pb) = (self.names.len(), self.names.len() + 1);
        let [na, nb] = names;
        self.names.extend([na, nb]);
        // the new point nearer the start of t in the face's boundary order is pa
        let beta_order = if s.out == HalfEdge::BetaPlus { [pb, pa] } else { [pa, pb] };
        let alpha_order = if t.out == HalfEdge::AlphaPlus { [pa, pb] } else { [pb, pa] };
        // the face is north of t exactly when t runs along α; β first leaves it
        let first_north = t.out == HalfEdge::AlphaMinus;
        self.beta_north.resize(pb + 1, false);
        self.beta_north[beta_order[0]] = first_north;
        self.beta_north[beta_order[1]] = !first_north;

        let insert = |words: &mut Vec<Vec<usize>>, (c, i): (usize, usize), forward: bool, pts: [usize; 2]| {
            // the edge leaves word[i] forwards, or arrives at word[i] from word[i-1]
            let w = &mut words[c];
            let at = if forward { i + 1 } else { i };
            let at = if at == 0 { w.len() } else { at };
            w.splice(at..at, pts);
        };
        insert(&mut self.beta, pos.beta[s.point], s.out == HalfEdge::BetaPlus, beta_order);
        insert(&mut self.alpha, pos.alpha[t.point], t.out == HalfEdge::AlphaPlus, alpha_order);
        Ok(())
    }

    /// Diagram whose regions are the traced faces, with the given
    /// decorations. Punctured faces become boundary annuli.
    pub fn to_spec(&self, decorations: &[FaceDecoration], eh: Option<Vec<String>>) -> Result<DiagramSpec, MapError> {
        let faces = self.faces()?;
        if decorations.len() != faces.len() {
            return Err(MapError::Decorations { expected: faces.len(), got: decorations.len() });
        }
        let pos = self.positions()?;
        let fid = |f: usize| format!("R{f}");
        let mut quad: Vec<[String; 4]> = vec![Default::default(); self.names.len()];
        let mut regions = Vec::new();
        for (f, (face, dec)) in faces.iter().zip(decorations).enumerate() {
            for &(p, q) in &face.corners {
                quad[p][q.index()] = fid(f);
            }
            regions.push(RegionSpec {
                id: fid(f),
                chi: if dec.punctured { 0 } else { 1 },
                corners: face.corners.iter().map(|&(p, q)| (self.names[p].clone(), q)).collect(),
                on_boundary: dec.punctured,
                basepoints: dec.basepoints as i64,
            });
        }
        let points = (0..self.names.len())
            .map(|p| {
                let [ne, nw, sw, se] = quad[p].clone();
                let spec = PointSpec {
                    alpha: pos.alpha[p].0 as i64,
                    beta: pos.beta[p].0 as i64,
                    quadrants: QuadrantsSpec { ne, nw, sw, se },
                };
                (self.names[p].clone(), spec)
            })
            .collect();
        let words = |ws: &Vec<Vec<usize>>| ws.iter().map(|w| w.iter().map(|&p| self.names[p].clone()).collect()).collect();
        Ok(DiagramSpec { alpha: words(&self.alpha), beta: words(&self.beta), points, regions, eh })
    }

    /// Components of Σ ∖ α (`cut_alpha`) or Σ ∖ β as lists of face indices.
    pub fn components(&self, faces: &[Face], cut_alpha: bool) -> Vec<Vec<usize>> {
        let mut owner: BTreeMap<Dart, usize> = BTreeMap::new();
        for (f, face) in faces.iter().enumerate() {
            for &d in &face.darts {
                owner.insert(d, f);
            }
        }
        let pos = self.positions().expect("faces were traced");
        let mut parent: Vec<usize> = (0..faces.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for (&d, &f) in &owner {
            // faces meet across edges of the other kind
            if d.out.is_alpha() == cut_alpha {
                continue;
            }
            let (w, h_in) = self.follow(&pos, d);
            let g = owner[&Dart { point: w, out: h_in }];
            let (a, b) = (find(&mut parent, f), find(&mut parent, g));
            parent[a] = b;
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in 0..faces.len() {
            let r = find(&mut parent, f);
            groups.entry(r).or_default().push(f);
        }
        groups.into_values().collect()
    }

    /// `n` horizontal α-circles and `n` vertical β-circles on a torus.
    pub fn torus_grid(n: usize) -> CurveMap {
        let names = (0..n * n).map(|k| format!("p{}_{}", k / n, k % n)).collect();
        let alpha = (0..n).map(|i| (0..n).map(|j| i * n + j).collect()).collect();
        let beta = (0..n).map(|j| (0..n).map(|i| i * n + j).collect()).collect();
        CurveMap { names, alpha, beta, beta_north: vec![true; n * n] }
    }
}
