//! Heegaard diagrams from partial open books.
//!
//! The page `S` is given as convex polygons glued along named edges, and
//! every arc is an edge path: the list of points where it crosses edges,
//! each as an edge name and a rational parameter along that edge. Inside a
//! polygon an arc is the straight chord between consecutive crossings.
//! The surface `P ∪_A −S` is assembled sheet by sheet, with `P` on the top
//! sheet and the mirrored copy of `S` on the bottom one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, DiagramSpec, HeegaardDiagram, PointSpec, Quadrant, QuadrantsSpec, RegionSpec};
use crate::planar::{self, BoundaryPoint, Chord, EdgeKind, PlanarError, Pt, VertexKind, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSpec {
    pub id: String,
    /// Edge names counterclockwise; a leading `-` traverses the edge
    /// against its own direction.
    pub edges: Vec<String>,
}

/// An edge crossing: edge name and a parameter in (0, 1) such as `"1/3"`.
pub type Crossing = (String, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub a: Vec<Crossing>,
    pub b: Vec<Crossing>,
    /// The image of `b` under the monodromy.
    pub hb: Vec<Crossing>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialOpenBook {
    pub faces: Vec<FaceSpec>,
    /// Faces making up `P`.
    pub page: Vec<String>,
    pub arcs: Vec<ArcSpec>,
}

impl PartialOpenBook {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Error)]
pub enum PobError {
    #[error("malformed surface: {0}")]
    Surface(String),
    #[error("arc {arc}: {reason}")]
    Path { arc: String, reason: String },
    #[error("arcs do not contain a basis: {0}")]
    NotBasis(String),
    #[error("monodromy image is not embeddable: {0}")]
    NotEmbeddable(String),
    #[error("arc b{0} is not a positive push-off meeting a{0} once")]
    PushOff(usize),
    #[error("face {face}: {source}")]
    Planar { face: String, source: PlanarError },
    #[error("assembled diagram is invalid: {0}")]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ArcKind {
    A,
    B,
    Hb,
}

impl ArcKind {
    fn label(self) -> &'static str {
        match self {
            ArcKind::A => "a",
            ArcKind::B => "b",
            ArcKind::Hb => "hb",
        }
    }
}

/// An edge occurrence in a face.
#[derive(Clone, Copy, Debug)]
struct Occ {
    face: usize,
    forward: bool,
}

struct Surface {
    faces: Vec<Vec<(usize, bool)>>,
    face_names: Vec<String>,
    edge_names: Vec<String>,
    occs: Vec<Vec<Occ>>,
    in_page: Vec<bool>,
}

impl Surface {
    fn build(pob: &PartialOpenBook) -> Result<Surface, PobError> {
        let mut edge_index: BTreeMap<String, usize> = BTreeMap::new();
        let mut edge_names = Vec::new();
        let mut occs: Vec<Vec<Occ>> = Vec::new();
        let mut faces = Vec::new();
        let mut face_names: Vec<String> = Vec::new();
        for (f, spec) in pob.faces.iter().enumerate() {
            if face_names.contains(&spec.id) {
                return Err(PobError::Surface(format!("face {} listed twice", spec.id)));
            }
            if spec.edges.len() < 3 {
                return Err(PobError::Surface(format!("face {} needs at least three edges", spec.id)));
            }
            let mut sides = Vec::new();
            for e in &spec.edges {
                let (name, forward) = match e.strip_prefix('-') {
                    Some(n) => (n, false),
                    None => (e.as_str(), true),
                };
                let id = *edge_index.entry(name.to_string()).or_insert_with(|| {
                    edge_names.push(name.to_string());
                    occs.push(Vec::new());
                    edge_names.len() - 1
                });
                if occs[id].iter().any(|o| o.face == f) {
                    return Err(PobError::Surface(format!("edge {name} appears twice on face {}", spec.id)));
                }
                occs[id].push(Occ { face: f, forward });
                sides.push((id, forward));
            }
            faces.push(sides);
            face_names.push(spec.id.clone());
        }
        for (e, o) in occs.iter().enumerate() {
            if o.len() > 2 {
                return Err(PobError::Surface(format!("edge {} is used more than twice", edge_names[e])));
            }
            if o.len() == 2 && o[0].forward == o[1].forward {
                return Err(PobError::Surface(format!("edge {} is glued without respecting orientation", edge_names[e])));
            }
        }
        let mut in_page = vec![false; faces.len()];
        for p in &pob.page {
            let f = face_names
                .iter()
                .position(|n| n == p)
                .ok_or_else(|| PobError::Surface(format!("page face {p} is not a face")))?;
            in_page[f] = true;
        }
        if !in_page.iter().any(|&b| b) {
            return Err(PobError::Surface("the page P is empty".into()));
        }
        if !occs.iter().any(|o| o.len() == 1) {
            return Err(PobError::Surface("S has no boundary".into()));
        }
        Ok(Surface { faces, face_names, edge_names, occs, in_page })
    }

    fn on_boundary(&self, e: usize) -> bool {
        self.occs[e].len() == 1
    }
}

/// One straight piece of an arc inside a face, with the parameters of its
/// endpoints along their edges.
#[derive(Clone, Debug)]
struct Step {
    face: usize,
    from: (usize, Q),
    to: (usize, Q),
}

fn resolve_path(s: &Surface, path: &[Crossing], arc: &str) -> Result<Vec<Step>, PobError> {
    let err = |reason: String| PobError::Path { arc: arc.to_string(), reason };
    if path.len() < 2 {
        return Err(err("needs at least two crossings".into()));
    }
    let mut pts = Vec::new();
    for (name, t) in path {
        let e = s.edge_names.iter().position(|n| n == name).ok_or_else(|| err(format!("unknown edge {name}")))?;
        let t = planar::parse_rational(t).ok_or_else(|| err(format!("bad parameter {t}")))?;
        pts.push((e, t));
    }
    let last = pts.len() - 1;
    if !s.on_boundary(pts[0].0) || !s.on_boundary(pts[last].0) {
        return Err(err("must start and end on the boundary of S".into()));
    }
    let mut face = s.occs[pts[0].0][0].face;
    let mut steps = Vec::new();
    for j in 0..last {
        if j > 0 {
            let e = pts[j].0;
            if s.on_boundary(e) {
                return Err(err(format!("touches the boundary of S at edge {}", s.edge_names[e])));
            }
            face = s.occs[e].iter().find(|o| o.face != face).map(|o| o.face).ok_or_else(|| err("edge path breaks".into()))?;
        }
        let next = pts[j + 1].0;
        if next == pts[j].0 || !s.faces[face].iter().any(|&(e, _)| e == next) {
            return Err(err(format!("edge {} is not on face {} after edge {}", s.edge_names[next], s.face_names[face], s.edge_names[pts[j].0])));
        }
        steps.push(Step { face, from: pts[j].clone(), to: pts[j + 1].clone() });
    }
    Ok(steps)
}

/// Top sheet holds `P`; bottom sheet holds `−S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Copy {
    Top,
    Bottom,
}

struct Sheet {
    copy: Copy,
    face: usize,
    sub: planar::Subdivision,
    /// For each chord: arc kind, arc index, step index.
    chords: Vec<(ArcKind, usize, usize)>,
    /// Parameter along the S-edge of each boundary point, and the side of
    /// the sheet polygon it lies on.
    points: Vec<(usize, Q)>,
}

impl Sheet {
    /// Side of the sheet polygon carrying S-occurrence `k`, and whether the
    /// side runs along the edge direction.
    fn side_of(&self, s: &Surface, k: usize) -> (usize, bool) {
        let n = s.faces[self.face].len();
        let fwd = s.faces[self.face][k].1;
        match self.copy {
            Copy::Top => (k, fwd),
            Copy::Bottom => (n - 1 - k, !fwd),
        }
    }

    /// S-occurrence index and edge orientation of a sheet side.
    fn occurrence(&self, s: &Surface, side: usize) -> (usize, bool) {
        let n = s.faces[self.face].len();
        let k = match self.copy {
            Copy::Top => side,
            Copy::Bottom => n - 1 - side,
        };
        let (e, fwd) = s.faces[self.face][k];
        (e, if self.copy == Copy::Top { fwd } else { !fwd })
    }
}

fn build_sheet(s: &Surface, copy: Copy, face: usize, steps: &[(ArcKind, usize, usize, &Step)]) -> Result<Sheet, PobError> {
    let n = s.faces[face].len();
    let mut sheet = Sheet { copy, face, sub: planar::Subdivision { coords: vec![], kinds: vec![], cells: vec![], along: vec![], on_side: vec![], boundary_vertex: vec![] }, chords: vec![], points: vec![] };
    let mut bps = Vec::new();
    let mut chords = Vec::new();
    let mut place = |sheet: &mut Sheet, (e, t): &(usize, Q)| -> usize {
        let k = s.faces[face].iter().position(|&(x, _)| x == *e).expect("edge on face");
        let (side, fwd) = sheet.side_of(s, k);
        let param = if fwd { t.clone() } else { Q::from_integer(1.into()) - t };
        bps.push(BoundaryPoint { side, t: param });
        sheet.points.push((*e, t.clone()));
        bps.len() - 1
    };
    for &(kind, i, j, st) in steps {
        let a = place(&mut sheet, &st.from);
        let b = place(&mut sheet, &st.to);
        chords.push(Chord { start: a, end: b, class: u8::from(kind != ArcKind::A) });
        sheet.chords.push((kind, i, j));
    }
    sheet.sub = planar::subdivide(&planar::convex_polygon(n), &bps, &chords).map_err(|source| {
        let label = |c: usize| {
            let (k, i, _) = sheet.chords[c];
            format!("{}{i}", k.label())
        };
        match source {
            PlanarError::ForbiddenCrossing(x, y) if sheet.chords[x].0 == ArcKind::Hb && sheet.chords[y].0 == ArcKind::Hb => {
                PobError::NotEmbeddable(format!("{} and {} cross on face {}", label(x), label(y), s.face_names[face]))
            }
            source => PobError::Planar { face: s.face_names[face].clone(), source },
        }
    })?;
    Ok(sheet)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A cell of the assembled surface and what each of its sides is glued to.
struct GCell {
    sheet: usize,
    local: usize,
    twins: Vec<Option<(usize, usize)>>,
}

struct Components {
    of_cell: Vec<usize>,
    chi: Vec<i64>,
    /// Number of boundary runs made of sides accepted by `run_side`.
    runs: Vec<usize>,
}

/// Components of the union of `cells` (a subset) glued along the sides
/// accepted by `glue`, with Euler characteristics of the cut surfaces.
fn components(
    cells: &[GCell],
    subset: &[usize],
    glue: impl Fn(usize, usize) -> bool,
    run_side: impl Fn(usize, usize) -> bool,
) -> Components {
    let mut offset = vec![usize::MAX; cells.len()];
    let mut total = 0;
    for &c in subset {
        offset[c] = total;
        total += cells[c].twins.len();
    }
    let mut cell_uf = UnionFind::new(cells.len());
    let mut vert_uf = UnionFind::new(total);
    let mut glued_sides = 0usize;
    for &c in subset {
        let n = cells[c].twins.len();
        for (i, tw) in cells[c].twins.iter().enumerate() {
            let Some((d, k)) = *tw else { continue };
            if offset[d] == usize::MAX || !glue(c, i) {
                continue;
            }
            glued_sides += 1;
            cell_uf.union(c, d);
            let m = cells[d].twins.len();
            vert_uf.union(offset[c] + i, offset[d] + (k + 1) % m);
            vert_uf.union(offset[c] + (i + 1) % n, offset[d] + k);
        }
    }
    let mut roots: Vec<usize> = subset.iter().map(|&c| cell_uf.find(c)).collect();
    roots.sort();
    roots.dedup();
    let index = |r: usize| roots.binary_search(&r).unwrap();
    let mut of_cell = vec![usize::MAX; cells.len()];
    let mut f = vec![0i64; roots.len()];
    let mut e = vec![0i64; roots.len()];
    let mut verts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); roots.len()];
    let mut run_uf = UnionFind::new(total);
    let mut run_starts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); roots.len()];
    for &c in subset {
        let comp = index(cell_uf.find(c));
        of_cell[c] = comp;
        f[comp] += 1;
        let n = cells[c].twins.len();
        e[comp] += n as i64;
        for i in 0..n {
            verts[comp].insert(vert_uf.find(offset[c] + i));
            if run_side(c, i) {
                let (a, b) = (vert_uf.find(offset[c] + i), vert_uf.find(offset[c] + (i + 1) % n));
                run_uf.union(a, b);
                run_starts[comp].insert(a);
            }
        }
    }
    // each glued side was counted from both cells
    let mut glued_per = vec![0i64; roots.len()];
    for &c in subset {
        for (i, tw) in cells[c].twins.iter().enumerate() {
            if let Some((d, _)) = *tw {
                if offset[d] != usize::MAX && glue(c, i) {
                    glued_per[of_cell[c]] += 1;
                }
            }
        }
    }
    debug_assert_eq!(glued_per.iter().sum::<i64>() as usize, glued_sides);
    let chi = (0..roots.len()).map(|k| verts[k].len() as i64 - (e[k] - glued_per[k] / 2) + f[k]).collect();
    let runs = run_starts
        .iter()
        .map(|s| s.iter().map(|&v| run_uf.find(v)).collect::<BTreeSet<_>>().len())
        .collect();
    Components { of_cell, chi, runs }
}

/// Assemble the sutured Heegaard diagram of a partial open book, with the
/// contact class set to the points `a_i ∩ b_i` on the top sheet.
pub fn assemble_spec(pob: &PartialOpenBook) -> Result<DiagramSpec, PobError> {
    let s = Surface::build(pob)?;
    let mut paths: Vec<[Vec<Step>; 3]> = Vec::new();
    for (i, arc) in pob.arcs.iter().enumerate() {
        let a = resolve_path(&s, &arc.a, &format!("a{i}"))?;
        let b = resolve_path(&s, &arc.b, &format!("b{i}"))?;
        let hb = resolve_path(&s, &arc.hb, &format!("hb{i}"))?;
        for (name, st) in [("a", &a), ("b", &b)] {
            if let Some(bad) = st.iter().find(|x| !s.in_page[x.face]) {
                return Err(PobError::Path { arc: format!("{name}{i}"), reason: format!("leaves P through face {}", s.face_names[bad.face]) });
            }
        }
        if hb[0].from != b[0].from || hb.last().unwrap().to != b.last().unwrap().to {
            return Err(PobError::NotEmbeddable(format!("hb{i} does not share the endpoints of b{i}")));
        }
        // b is pushed along the boundary orientation of S at both ends
        for (pa, pb) in [(&a[0].from, &b[0].from), (&a.last().unwrap().to, &b.last().unwrap().to)] {
            let fwd = s.occs[pa.0][0].forward;
            let ahead = if fwd { pb.1 > pa.1 } else { pb.1 < pa.1 };
            if pa.0 != pb.0 || !ahead {
                return Err(PobError::PushOff(i));
            }
        }
        paths.push([a, b, hb]);
    }
    if pob.arcs.is_empty() {
        return Err(PobError::NotBasis("no arcs given".into()));
    }

    // sheets
    let mut sheets: Vec<Sheet> = Vec::new();
    for copy in [Copy::Top, Copy::Bottom] {
        for face in 0..s.faces.len() {
            if copy == Copy::Top && !s.in_page[face] {
                continue;
            }
            let mut steps = Vec::new();
            for (i, p) in paths.iter().enumerate() {
                let kinds: [(ArcKind, &Vec<Step>); 2] = match copy {
                    Copy::Top => [(ArcKind::A, &p[0]), (ArcKind::B, &p[1])],
                    Copy::Bottom => [(ArcKind::A, &p[0]), (ArcKind::Hb, &p[2])],
                };
                for (kind, st) in kinds {
                    for (j, step) in st.iter().enumerate() {
                        if step.face == face {
                            steps.push((kind, i, j, step));
                        }
                    }
                }
            }
            sheets.push(build_sheet(&s, copy, face, &steps)?);
        }
    }
    let sheet_of = |copy: Copy, face: usize| sheets.iter().position(|x| x.copy == copy && x.face == face);

    // global cells
    let mut cells: Vec<GCell> = Vec::new();
    let mut cell_offset = Vec::new();
    for (k, sh) in sheets.iter().enumerate() {
        cell_offset.push(cells.len());
        for (c, cell) in sh.sub.cells.iter().enumerate() {
            cells.push(GCell { sheet: k, local: c, twins: vec![None; cell.sides.len()] });
        }
    }
    // chord sides pair up inside a sheet; polygon sides by edge slot
    type Slot = (usize, u8, Q, Q);
    let mut slots: BTreeMap<Slot, Vec<(usize, usize, Q)>> = BTreeMap::new();
    let mut chord_sides: BTreeMap<(usize, usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (g, gc) in cells.iter().enumerate() {
        let sh = &sheets[gc.sheet];
        let cell = &sh.sub.cells[gc.local];
        for (i, kind) in cell.sides.iter().enumerate() {
            match *kind {
                EdgeKind::Chord { chord, piece, .. } => chord_sides.entry((gc.sheet, chord, piece)).or_default().push((g, i)),
                EdgeKind::Side { side, .. } => {
                    let (e, fwd) = sh.occurrence(&s, side);
                    let param = |v: usize| -> Q {
                        match sh.sub.kinds[v] {
                            VertexKind::Boundary(b) => sh.points[b].1.clone(),
                            VertexKind::Corner(c) => {
                                let at_start = c == side;
                                Q::from_integer(if at_start == fwd { 0.into() } else { 1.into() })
                            }
                            VertexKind::Crossing(..) => unreachable!("crossings are interior"),
                        }
                    };
                    let n = cell.vertices.len();
                    let (t0, t1) = (param(cell.vertices[i]), param(cell.vertices[(i + 1) % n]));
                    let layer = if s.on_boundary(e) { 2 } else { sh.copy as u8 };
                    let (lo, hi) = if t0 < t1 { (t0.clone(), t1) } else { (t1, t0.clone()) };
                    slots.entry((e, layer, lo, hi)).or_default().push((g, i, t0));
                }
            }
        }
    }
    for list in chord_sides.values() {
        if let [(c, i), (d, k)] = list[..] {
            cells[c].twins[i] = Some((d, k));
            cells[d].twins[k] = Some((c, i));
        }
    }
    for list in slots.values() {
        match &list[..] {
            [_] => {}
            [(c, i, t0), (d, k, u0)] => {
                if t0 == u0 {
                    return Err(PobError::Surface("faces are glued against their orientations".into()));
                }
                cells[*c].twins[*i] = Some((*d, *k));
                cells[*d].twins[*k] = Some((*c, *i));
            }
            _ => return Err(PobError::Surface("an edge segment is shared by more than two faces".into())),
        }
    }

    // regions: cut along every curve
    let all: Vec<usize> = (0..cells.len()).collect();
    let is_side = |c: usize, i: usize, cells: &[GCell]| {
        let gc = &cells[c];
        matches!(sheets[gc.sheet].sub.cells[gc.local].sides[i], EdgeKind::Side { .. })
    };
    let regions = components(&cells, &all, |c, i| is_side(c, i, &cells), |c, i| is_side(c, i, &cells) && cells[c].twins[i].is_none());

    // components of P ∖ a on the top sheet
    let top: Vec<usize> = (0..cells.len()).filter(|&c| sheets[cells[c].sheet].copy == Copy::Top).collect();
    let is_b_chord = |c: usize, i: usize| {
        let gc = &cells[c];
        let sh = &sheets[gc.sheet];
        matches!(sh.sub.cells[gc.local].sides[i], EdgeKind::Chord { chord, .. } if sh.chords[chord].0 == ArcKind::B)
    };
    let pieces = components(
        &cells,
        &top,
        |c, i| is_b_chord(c, i) || is_side(c, i, &cells),
        |c, i| is_side(c, i, &cells) && cells[c].twins[i].is_none(),
    );
    for (k, (&chi, &runs)) in pieces.chi.iter().zip(&pieces.runs).enumerate() {
        if chi != 1 || runs > 1 {
            let what = if chi != 1 { format!("a component of P minus the arcs has Euler characteristic {chi}") } else { format!("a component of P minus the arcs meets the attaching region in {runs} arcs") };
            let _ = k;
            return Err(PobError::NotBasis(what));
        }
    }

    // intersection points, named in the order the α curves meet them
    let mut point_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut alpha_words = Vec::new();
    let mut beta_words = Vec::new();
    let mut counts = [0usize; 2];
    let walk = |kind_top: ArcKind, kind_bottom: ArcKind, i: usize, steps_top: &[Step], steps_bottom: &[Step]| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (copy, kind, steps, rev) in [(Copy::Top, kind_top, steps_top, false), (Copy::Bottom, kind_bottom, steps_bottom, true)] {
            let order: Vec<usize> = if rev { (0..steps.len()).rev().collect() } else { (0..steps.len()).collect() };
            for j in order {
                let k = sheet_of(copy, steps[j].face).expect("sheet exists");
                let chord = sheets[k].chords.iter().position(|&c| c == (kind, i, j)).expect("chord placed");
                let mut pts: Vec<usize> = sheets[k].sub.along[chord].clone();
                if rev {
                    pts.reverse();
                }
                out.extend(pts.into_iter().map(|v| (k, v)));
            }
        }
        out
    };
    for (i, p) in paths.iter().enumerate() {
        let mut word = Vec::new();
        for key in walk(ArcKind::A, ArcKind::A, i, &p[0], &p[0]) {
            let copy = sheets[key.0].copy as usize;
            counts[copy] += 1;
            names.push(format!("{}{}", ["p", "q"][copy], counts[copy]));
            point_of.insert(key, names.len() - 1);
            word.push(names.len() - 1);
        }
        alpha_words.push(word);
    }
    for (i, p) in paths.iter().enumerate() {
        let word: Vec<usize> = walk(ArcKind::B, ArcKind::Hb, i, &p[1], &p[2]).iter().map(|k| point_of[k]).collect();
        beta_words.push(word);
    }
    let mut curve_of = vec![(0usize, 0usize); names.len()];
    for (i, w) in alpha_words.iter().enumerate() {
        for &p in w {
            curve_of[p].0 = i;
        }
    }
    for (j, w) in beta_words.iter().enumerate() {
        for &p in w {
            curve_of[p].1 = j;
        }
    }

    // quadrants
    let region_name = |r: usize| format!("R{}", r + 1);
    let mut quad: Vec<[usize; 4]> = vec![[0; 4]; names.len()];
    let mut eh = vec![None; paths.len()];
    for (&(k, v), &p) in &point_of {
        let sh = &sheets[k];
        let VertexKind::Crossing(c1, c2) = sh.sub.kinds[v] else { unreachable!() };
        let (ca, cb) = if sh.chords[c1].0 == ArcKind::A { (c1, c2) } else { (c2, c1) };
        let dir = |c: usize| -> Pt {
            let bv = &sh.sub.boundary_vertex;
            let d = sh.sub.direction(bv[2 * c], bv[2 * c + 1]);
            // curves run backwards on the bottom sheet
            if sh.copy == Copy::Bottom {
                Pt::new(-d.x, -d.y)
            } else {
                d
            }
        };
        let (ap, bp) = (dir(ca), dir(cb));
        let north = if planar::cross(&ap, &bp) > Q::from_integer(0.into()) { bp.clone() } else { Pt::new(-bp.x.clone(), -bp.y.clone()) };
        let rays = [ap.clone(), north.clone(), Pt::new(-ap.x, -ap.y), Pt::new(-north.x, -north.y)];
        for (j, r) in rays.iter().enumerate() {
            let local = sh.sub.cell_leaving(v, r).expect("sector has a cell");
            quad[p][j] = regions.of_cell[cell_offset[k] + local];
        }
        let (_, i, _) = sh.chords[ca];
        if sh.copy == Copy::Top && sh.chords[cb].0 == ArcKind::B && sh.chords[cb].1 == i {
            if eh[i].is_some() {
                return Err(PobError::PushOff(i));
            }
            eh[i] = Some(p);
        }
    }
    let eh: Vec<String> = eh.iter().enumerate().map(|(i, p)| p.map(|p| names[p].clone()).ok_or(PobError::PushOff(i))).collect::<Result<_, _>>()?;

    // basepoints in pieces of P ∖ a away from the attaching region
    let mut basepoints = vec![0i64; regions.chi.len()];
    let eh_vertices: BTreeSet<(usize, usize)> = point_of.iter().filter(|(_, &p)| eh.contains(&names[p])).map(|(&k, _)| k).collect();
    for piece in 0..pieces.chi.len() {
        if pieces.runs[piece] > 0 {
            continue;
        }
        let members: Vec<usize> = top.iter().copied().filter(|&c| pieces.of_cell[c] == piece).collect();
        let touches_eh = |c: usize| {
            let gc = &cells[c];
            sheets[gc.sheet].sub.cells[gc.local].vertices.iter().any(|&v| eh_vertices.contains(&(gc.sheet, v)))
        };
        let chosen = members.iter().copied().find(|&c| !touches_eh(c)).unwrap_or(members[0]);
        basepoints[regions.of_cell[chosen]] += 1;
    }

    let mut corners: Vec<Vec<(String, Quadrant)>> = vec![Vec::new(); regions.chi.len()];
    for (p, q) in quad.iter().enumerate() {
        for (j, &r) in q.iter().enumerate() {
            corners[r].push((names[p].clone(), Quadrant::ALL[j]));
        }
    }
    let on_boundary: Vec<bool> = {
        let mut b = vec![false; regions.chi.len()];
        for (c, gc) in cells.iter().enumerate() {
            if (0..gc.twins.len()).any(|i| is_side(c, i, &cells) && gc.twins[i].is_none()) {
                b[regions.of_cell[c]] = true;
            }
        }
        b
    };
    let region_specs = (0..regions.chi.len())
        .map(|r| RegionSpec {
            id: region_name(r),
            chi: regions.chi[r],
            corners: corners[r].clone(),
            on_boundary: on_boundary[r],
            basepoints: basepoints[r],
        })
        .collect();
    let points = names
        .iter()
        .enumerate()
        .map(|(p, name)| {
            let [ne, nw, sw, se] = quad[p].map(region_name);
            (name.clone(), PointSpec { alpha: curve_of[p].0 as i64, beta: curve_of[p].1 as i64, quadrants: QuadrantsSpec { ne, nw, sw, se } })
        })
        .collect();
    let words = |ws: &[Vec<usize>]| ws.iter().map(|w| w.iter().map(|&p| names[p].clone()).collect()).collect();
    Ok(DiagramSpec { alpha: words(&alpha_words), beta: words(&beta_words), points, regions: region_specs, eh: Some(eh) })
}

pub fn assemble_from_partial_open_book(pob: &PartialOpenBook) -> Result<HeegaardDiagram, PobError> {
    Ok(HeegaardDiagram::from_spec(&assemble_spec(pob)?)?)
}
