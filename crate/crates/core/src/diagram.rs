//! Combinatorial multi-pointed sutured Heegaard diagrams.
//!
//! A diagram is stored region-first. Every intersection point lists the
//! region occupying each of its four quadrants, and every region lists its
//! corners. The quadrant labels follow a fixed local picture: the α-curve
//! through the point runs east, north is the left-hand side of α with
//! respect to the orientation of Σ, and the labels `NE, NW, SW, SE` run
//! counterclockwise. The β-curve may cross northwards or southwards.
//!
//! Point indices follow the order of appearance in the α words (α₀ first).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    NE,
    NW,
    SW,
    SE,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Sign of this quadrant's contribution to `∂(∂D ∩ α)` at its point.
    pub fn alpha_boundary_sign(self) -> i64 {
        match self {
            Quadrant::NW | Quadrant::SE => 1,
            Quadrant::NE | Quadrant::SW => -1,
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Alpha,
    Beta,
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrantsSpec {
    #[serde(rename = "NE")]
    pub ne: String,
    #[serde(rename = "NW")]
    pub nw: String,
    #[serde(rename = "SW")]
    pub sw: String,
    #[serde(rename = "SE")]
    pub se: String,
}

impl QuadrantsSpec {
    pub fn get(&self, q: Quadrant) -> &str {
        match q {
            Quadrant::NE => &self.ne,
            Quadrant::NW => &self.nw,
            Quadrant::SW => &self.sw,
            Quadrant::SE => &self.se,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub alpha: i64,
    pub beta: i64,
    pub quadrants: QuadrantsSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub id: String,
    pub chi: i64,
    pub corners: Vec<(String, Quadrant)>,
    pub on_boundary: bool,
    pub basepoints: i64,
}

/// The on-disk diagram format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    pub alpha: Vec<Vec<String>>,
    pub beta: Vec<Vec<String>>,
    pub points: BTreeMap<String, PointSpec>,
    pub regions: Vec<RegionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eh: Option<Vec<String>>,
}

impl DiagramSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serialization")
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Balance,
    CrossReference,
    Incidence,
    EdgeConsistency,
    Value,
    Eh,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation { kind, message: message.into() });
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "diagram is well-formed");
        }
        for v in &self.violations {
            writeln!(f, "[{:?}] {}", v.kind, v.message)?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a diagram file and lists all
/// violations found. An empty report means the file describes a valid
/// diagram.
pub fn validate_diagram(spec: &DiagramSpec) -> ValidationReport {
    use ViolationKind::*;
    let mut report = ValidationReport::default();
    let d = spec.alpha.len();
    if spec.beta.len() != d {
        report.push(Balance, format!("{} α-curves but {} β-curves", d, spec.beta.len()));
    }

    let region_ids: HashMap<&str, usize> = spec.regions.iter().enumerate().map(|(i, r)| (r.id.as_str(), i)).collect();
    if region_ids.len() != spec.regions.len() {
        let mut seen = BTreeSet::new();
        for r in &spec.regions {
            if !seen.insert(r.id.as_str()) {
                report.push(CrossReference, format!("duplicate region id {:?}", r.id));
            }
        }
    }

    for (pid, p) in &spec.points {
        if p.alpha < 0 || p.alpha as usize >= d {
            report.push(CrossReference, format!("point {pid:?} names α-curve {} which does not exist", p.alpha));
        }
        if p.beta < 0 || p.beta as usize >= spec.beta.len() {
            report.push(CrossReference, format!("point {pid:?} names β-curve {} which does not exist", p.beta));
        }
        for q in Quadrant::ALL {
            let rid = p.quadrants.get(q);
            if !region_ids.contains_key(rid) {
                report.push(Incidence, format!("point {pid:?} quadrant {q} names missing region {rid:?}"));
            }
        }
    }

    for (kind, curves) in [(CurveKind::Alpha, &spec.alpha), (CurveKind::Beta, &spec.beta)] {
        let sym = if kind == CurveKind::Alpha { "α" } else { "β" };
        let mut occurrences: HashMap<&str, Vec<usize>> = HashMap::new();
        for (ci, word) in curves.iter().enumerate() {
            for pid in word {
                occurrences.entry(pid.as_str()).or_default().push(ci);
                match spec.points.get(pid) {
                    None => report.push(CrossReference, format!("{sym}{ci} lists unknown point {pid:?}")),
                    Some(p) => {
                        let own = if kind == CurveKind::Alpha { p.alpha } else { p.beta };
                        if own != ci as i64 {
                            report.push(CrossReference, format!("{sym}{ci} lists point {pid:?} which names {sym}{own}"));
                        }
                    }
                }
            }
        }
        for pid in spec.points.keys() {
            match occurrences.get(pid.as_str()).map(Vec::len).unwrap_or(0) {
                1 => {}
                0 => report.push(CrossReference, format!("point {pid:?} does not occur on any {sym}-curve")),
                n => report.push(CrossReference, format!("point {pid:?} occurs {n} times on {sym}-curves")),
            }
        }
    }

    // corner lists against the inverse of the quadrant map
    let mut expected: HashMap<usize, BTreeMap<(String, Quadrant), i64>> = HashMap::new();
    for (pid, p) in &spec.points {
        for q in Quadrant::ALL {
            if let Some(&ri) = region_ids.get(p.quadrants.get(q)) {
                *expected.entry(ri).or_default().entry((pid.clone(), q)).or_default() += 1;
            }
        }
    }
    for (ri, r) in spec.regions.iter().enumerate() {
        let mut listed: BTreeMap<(String, Quadrant), i64> = BTreeMap::new();
        for (pid, q) in &r.corners {
            *listed.entry((pid.clone(), *q)).or_default() += 1;
            match spec.points.get(pid) {
                None => report.push(CrossReference, format!("region {:?} lists corner at unknown point {pid:?}", r.id)),
                Some(p) if p.quadrants.get(*q) != r.id => report.push(
                    Incidence,
                    format!("region {:?} lists corner ({pid}, {q}) but that quadrant belongs to {:?}", r.id, p.quadrants.get(*q)),
                ),
                Some(_) => {}
            }
        }
        let exp = expected.remove(&ri).unwrap_or_default();
        if listed != exp {
            let n_exp: i64 = exp.values().sum();
            report.push(
                Incidence,
                format!("region {:?} lists {} corners but {} quadrant entries reference it", r.id, r.corners.len(), n_exp),
            );
        }
        if r.basepoints < 0 {
            report.push(Value, format!("region {:?} has negative basepoint count {}", r.id, r.basepoints));
        }
    }

    if report.has(CrossReference) || report.has(Incidence) {
        // edge checks need resolvable references
    } else {
        check_alpha_edges(spec, &mut report);
        check_beta_edges(spec, &mut report);
    }

    if let Some(eh) = &spec.eh {
        match resolve_generator(spec, eh) {
            Ok(()) => {}
            Err(msg) => report.push(Eh, msg),
        }
    }
    report
}

fn check_alpha_edges(spec: &DiagramSpec, report: &mut ValidationReport) {
    for (ci, word) in spec.alpha.iter().enumerate() {
        for (k, pid) in word.iter().enumerate() {
            let next = &word[(k + 1) % word.len()];
            let p = &spec.points[pid].quadrants;
            let q = &spec.points[next].quadrants;
            if p.ne != q.nw || p.se != q.sw {
                report.push(
                    ViolationKind::EdgeConsistency,
                    format!("α{ci} segment {pid}→{next}: sides ({}, {}) at {pid} do not match ({}, {}) at {next}", p.ne, p.se, q.nw, q.sw),
                );
            }
        }
    }
}

/// Left/right regions of the β half-edge leaving `p` (`north` says which
/// way β crosses at `p`).
fn beta_out_sides(q: &QuadrantsSpec, north: bool) -> (&str, &str) {
    if north { (&q.nw, &q.ne) } else { (&q.se, &q.sw) }
}

fn beta_in_sides(q: &QuadrantsSpec, north: bool) -> (&str, &str) {
    if north { (&q.sw, &q.se) } else { (&q.ne, &q.nw) }
}

/// Infers the crossing direction of β at every point of each β-curve so that
/// adjacent points agree on the regions to either side of each segment.
/// Returns `None` for a curve where no consistent choice exists.
pub(crate) fn infer_beta_directions(spec: &DiagramSpec, word: &[String]) -> Option<Vec<bool>> {
    if word.is_empty() {
        return Some(Vec::new());
    }
    'start: for first in [true, false] {
        let mut dirs = vec![first];
        for k in 0..word.len() {
            let p = &spec.points[&word[k]].quadrants;
            let q = &spec.points[&word[(k + 1) % word.len()]].quadrants;
            let out = beta_out_sides(p, dirs[k]);
            let candidates: Vec<bool> = if k + 1 == word.len() {
                vec![dirs[0]]
            } else {
                vec![true, false]
            };
            let mut chosen = None;
            for c in candidates {
                if beta_in_sides(q, c) == out {
                    chosen = Some(c);
                    break;
                }
            }
            match chosen {
                Some(c) if k + 1 < word.len() => dirs.push(c),
                Some(_) => {}
                None => continue 'start,
            }
        }
        return Some(dirs);
    }
    None
}

fn check_beta_edges(spec: &DiagramSpec, report: &mut ValidationReport) {
    for (ci, word) in spec.beta.iter().enumerate() {
        if infer_beta_directions(spec, word).is_none() {
            report.push(
                ViolationKind::EdgeConsistency,
                format!("β{ci}: no choice of crossing directions makes adjacent quadrant data agree"),
            );
        }
    }
}

fn resolve_generator(spec: &DiagramSpec, ids: &[String]) -> Result<(), String> {
    let d = spec.alpha.len();
    if ids.len() != d {
        return Err(format!("generator lists {} points but the diagram has {d} α-curves", ids.len()));
    }
    let mut alphas = BTreeSet::new();
    let mut betas = BTreeSet::new();
    for pid in ids {
        let p = spec.points.get(pid).ok_or_else(|| format!("generator names unknown point {pid:?}"))?;
        if !alphas.insert(p.alpha) {
            return Err(format!("generator uses α{} twice", p.alpha));
        }
        if !betas.insert(p.beta) {
            return Err(format!("generator uses β{} twice", p.beta));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Indexed diagram
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub id: String,
    pub alpha: usize,
    pub beta: usize,
    /// Region index per quadrant, in `Quadrant::ALL` order.
    pub quadrants: [usize; 4],
}

impl IntersectionPoint {
    pub fn region(&self, q: Quadrant) -> usize {
        self.quadrants[q.index()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: String,
    pub chi: i64,
    pub corners: Vec<(usize, Quadrant)>,
    pub on_boundary: bool,
    pub basepoints: u32,
}

impl Region {
    /// Regions that disks may cover: no basepoint and away from the suture.
    pub fn is_free(&self) -> bool {
        self.basepoints == 0 && !self.on_boundary
    }
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("invalid diagram:\n{0}")]
    Invalid(ValidationReport),
    #[error("diagram has no EH generator marked")]
    NoEh,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
}

/// A validated diagram with all references resolved to indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegaardDiagram {
    pub alpha: Vec<Vec<usize>>,
    pub beta: Vec<Vec<usize>>,
    pub points: Vec<IntersectionPoint>,
    pub regions: Vec<Region>,
    pub eh: Option<Vec<usize>>,
    point_index: HashMap<String, usize>,
    region_index: HashMap<String, usize>,
}

impl HeegaardDiagram {
    pub fn from_spec(spec: &DiagramSpec) -> Result<Self, DiagramError> {
        let report = validate_diagram(spec);
        if !report.is_empty() {
            return Err(DiagramError::Invalid(report));
        }
        let mut point_ids: Vec<&String> = Vec::new();
        for word in &spec.alpha {
            point_ids.extend(word.iter());
        }
        let point_index: HashMap<String, usize> = point_ids.iter().enumerate().map(|(i, p)| ((*p).clone(), i)).collect();
        let region_index: HashMap<String, usize> =
            spec.regions.iter().enumerate().map(|(i, r)| (r.id.clone(), i)).collect();
        let points = point_ids
            .iter()
            .map(|pid| {
                let p = &spec.points[*pid];
                IntersectionPoint {
                    id: (*pid).clone(),
                    alpha: p.alpha as usize,
                    beta: p.beta as usize,
                    quadrants: Quadrant::ALL.map(|q| region_index[p.quadrants.get(q)]),
                }
            })
            .collect();
        let regions = spec
            .regions
            .iter()
            .map(|r| Region {
                id: r.id.clone(),
                chi: r.chi,
                corners: r.corners.iter().map(|(p, q)| (point_index[p], *q)).collect(),
                on_boundary: r.on_boundary,
                basepoints: r.basepoints as u32,
            })
            .collect();
        let map_word = |w: &Vec<String>| w.iter().map(|p| point_index[p]).collect::<Vec<_>>();
        Ok(HeegaardDiagram {
            alpha: spec.alpha.iter().map(map_word).collect(),
            beta: spec.beta.iter().map(map_word).collect(),
            points,
            regions,
            eh: spec.eh.as_ref().map(map_word),
            point_index,
            region_index,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramLoadError> {
        let spec = DiagramSpec::from_json(text)?;
        Ok(Self::from_spec(&spec)?)
    }

    pub fn to_spec(&self) -> DiagramSpec {
        let pid = |i: &usize| self.points[*i].id.clone();
        DiagramSpec {
            alpha: self.alpha.iter().map(|w| w.iter().map(pid).collect()).collect(),
            beta: self.beta.iter().map(|w| w.iter().map(pid).collect()).collect(),
            points: self
                .points
                .iter()
                .map(|p| {
                    let r = |q: Quadrant| self.regions[p.region(q)].id.clone();
                    (
                        p.id.clone(),
                        PointSpec {
                            alpha: p.alpha as i64,
                            beta: p.beta as i64,
                            quadrants: QuadrantsSpec {
                                ne: r(Quadrant::NE),
                                nw: r(Quadrant::NW),
                                sw: r(Quadrant::SW),
                                se: r(Quadrant::SE),
                            },
                        },
                    )
                })
                .collect(),
            regions: self
                .regions
                .iter()
                .map(|r| RegionSpec {
                    id: r.id.clone(),
                    chi: r.chi,
                    corners: r.corners.iter().map(|(p, q)| (self.points[*p].id.clone(), *q)).collect(),
                    on_boundary: r.on_boundary,
                    basepoints: r.basepoints as i64,
                })
                .collect(),
            eh: self.eh.as_ref().map(|w| w.iter().map(pid).collect()),
        }
    }

    /// Number of α-curves (equal to the number of β-curves).
    pub fn d(&self) -> usize {
        self.alpha.len()
    }

    pub fn point(&self, id: &str) -> Option<usize> {
        self.point_index.get(id).copied()
    }

    pub fn region(&self, id: &str) -> Option<usize> {
        self.region_index.get(id).copied()
    }

    /// Builds a generator from point ids listed in any order.
    pub fn generator_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Generator, DiagramError> {
        let pts = ids
            .iter()
            .map(|s| self.point(s.as_ref()).ok_or_else(|| DiagramError::UnknownPoint(s.as_ref().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Generator::from_points(self, &pts)
    }

    /// `(p₀,p₁,…)` with the point on α₀ first.
    pub fn generator_name(&self, g: &Generator) -> String {
        let ids: Vec<&str> = g.points.iter().map(|&p| self.points[p].id.as_str()).collect();
        format!("({})", ids.join(","))
    }

    /// Disjoint union with ids prefixed by `left` and `right`. The second
    /// diagram's curves are numbered after the first's.
    pub fn disjoint_union(&self, other: &HeegaardDiagram, left: &str, right: &str) -> HeegaardDiagram {
        let a = self.to_spec();
        let b = other.to_spec();
        let d = a.alpha.len() as i64;
        let rename = |prefix: &str, s: &str| format!("{prefix}{s}");
        let mut spec = DiagramSpec {
            alpha: Vec::new(),
            beta: Vec::new(),
            points: BTreeMap::new(),
            regions: Vec::new(),
            eh: None,
        };
        for (prefix, part, shift) in [(left, &a, 0), (right, &b, d)] {
            let rn = |s: &String| rename(prefix, s);
            spec.alpha.extend(part.alpha.iter().map(|w| w.iter().map(rn).collect::<Vec<_>>()));
            spec.beta.extend(part.beta.iter().map(|w| w.iter().map(rn).collect::<Vec<_>>()));
            for (pid, p) in &part.points {
                spec.points.insert(
                    rn(pid),
                    PointSpec {
                        alpha: p.alpha + shift,
                        beta: p.beta + shift,
                        quadrants: QuadrantsSpec {
                            ne: rn(&p.quadrants.ne),
                            nw: rn(&p.quadrants.nw),
                            sw: rn(&p.quadrants.sw),
                            se: rn(&p.quadrants.se),
                        },
                    },
                );
            }
            spec.regions.extend(part.regions.iter().map(|r| RegionSpec {
                id: rn(&r.id),
                chi: r.chi,
                corners: r.corners.iter().map(|(p, q)| (rn(p), *q)).collect(),
                on_boundary: r.on_boundary,
                basepoints: r.basepoints,
            }));
        }
        if let (Some(ea), Some(eb)) = (&a.eh, &b.eh) {
            let mut eh: Vec<String> = ea.iter().map(|s| rename(left, s)).collect();
            eh.extend(eb.iter().map(|s| rename(right, s)));
            spec.eh = Some(eh);
        }
        HeegaardDiagram::from_spec(&spec).expect("disjoint union of valid diagrams is valid")
    }
}

#[derive(Debug, Error)]
pub enum DiagramLoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// A system of intersection points, one on each α-curve, using each β-curve
/// exactly once.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    /// Point index on α₀, α₁, ….
    pub points: Vec<usize>,
    /// The induced bijection α-index → β-index.
    pub permutation: Vec<usize>,
}

impl Generator {
    /// Builds a generator from a set of point indices in any order.
    pub fn from_points(d: &HeegaardDiagram, pts: &[usize]) -> Result<Generator, DiagramError> {
        let n = d.d();
        if pts.len() != n {
            return Err(DiagramError::InvalidGenerator(format!("{} points for {n} α-curves", pts.len())));
        }
        let mut by_alpha = vec![usize::MAX; n];
        for &p in pts {
            let a = d.points[p].alpha;
            if by_alpha[a] != usize::MAX {
                return Err(DiagramError::InvalidGenerator(format!("two points on α{a}")));
            }
            by_alpha[a] = p;
        }
        let permutation: Vec<usize> = by_alpha.iter().map(|&p| d.points[p].beta).collect();
        let mut seen = vec![false; n];
        for &b in &permutation {
            if std::mem::replace(&mut seen[b], true) {
                return Err(DiagramError::InvalidGenerator(format!("two points on β{b}")));
            }
        }
        Ok(Generator { points: by_alpha, permutation })
    }

    pub fn cycles(&self) -> usize {
        count_cycles(&self.permutation).expect("generator permutation is bijective")
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.contains(&p)
    }
}

/// Number of cycles of a permutation given as `i ↦ perm[i]`; `None` when
/// `perm` is not a bijection of `0..perm.len()`.
pub fn count_cycles(perm: &[usize]) -> Option<usize> {
    let n = perm.len();
    let mut seen = vec![false; n];
    if perm.iter().any(|&b| b >= n || std::mem::replace(&mut seen[b], true)) {
        return None;
    }
    let mut visited = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = perm[i];
        }
    }
    Some(cycles)
}

/// The cycle count `|x|` of a generator's α→β permutation.
pub fn cycle_count(g: &Generator) -> Result<usize, DiagramError> {
    count_cycles(&g.permutation).ok_or_else(|| DiagramError::InvalidGenerator("permutation is not bijective".into()))
}

/// All generators of the diagram in lexicographic order of their point
/// index vectors.
pub fn enumerate_generators(d: &HeegaardDiagram) -> Vec<Generator> {
    let n = d.d();
    let mut on_alpha: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in d.points.iter().enumerate() {
        on_alpha[p.alpha].push(i);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        d: &HeegaardDiagram,
        on_alpha: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Generator>,
    ) {
        let a = chosen.len();
        if a == on_alpha.len() {
            let permutation = chosen.iter().map(|&p| d.points[p].beta).collect();
            out.push(Generator { points: chosen.clone(), permutation });
            return;
        }
        for &p in &on_alpha[a] {
            let b = d.points[p].beta;
            if !used[b] {
                used[b] = true;
                chosen.push(p);
                rec(d, on_alpha, chosen, used, out);
                chosen.pop();
                used[b] = false;
            }
        }
    }
    rec(d, &on_alpha, &mut chosen, &mut used, &mut out);
    out
}

/// The marked EH generator.
pub fn eh_generator(d: &HeegaardDiagram) -> Result<Generator, DiagramError> {
    let pts = d.eh.as_ref().ok_or(DiagramError::NoEh)?;
    Generator::from_points(d, pts)
}

// ---------------------------------------------------------------------------
// Niceness
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceViolation {
    pub region: String,
    pub chi: i64,
    pub corners: usize,
}

/// Regions that break niceness: every region away from the suture and
/// without basepoints must be a bigon or a square.
pub fn check_nice(d: &HeegaardDiagram) -> Vec<NiceViolation> {
    d.regions
        .iter()
        .filter(|r| r.is_free())
        .filter(|r| !(r.chi == 1 && (r.corners.len() == 2 || r.corners.len() == 4)))
        .map(|r| NiceViolation { region: r.id.clone(), chi: r.chi, corners: r.corners.len() })
        .collect()
}
