//! The gluing map Φ: y ↦ (y, x′) from a sub-diagram's complex to a
//! super-diagram's complex, its verification as a filtered chain map, and
//! the torsion inequality it implies.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Element, FilteredComplex};
use crate::diagram::{check_nice, enumerate_generators, Generator, HeegaardDiagram, Quadrant};
use crate::disks::{enumerate_disks, CountedDisk, DiskError, SplitDifferential};
use crate::domains::check_admissible;
use crate::f2::BitVec;
use crate::torsion::{algebraic_torsion, AtOptions, AtValue, TorsionError};

#[derive(Debug, Error)]
pub enum GluingError {
    #[error("map refers to unknown {kind} {id:?}")]
    Unknown { kind: &'static str, id: String },
    #[error("map is missing the image of {kind} {id:?}")]
    Missing { kind: &'static str, id: String },
    #[error("map sends two {kind}s to {id:?}")]
    NotInjective { kind: &'static str, id: String },
    #[error("x′ does not complete sub-generators: {0}")]
    BadXPrime(String),
    #[error("{which} diagram is not nice")]
    NotNice { which: &'static str },
    #[error("{which} diagram is not admissible")]
    NotAdmissible { which: &'static str },
    #[error("could not parse map: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

/// The MAP file: sub ids to super ids, curve index tables and x′.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingMap {
    pub points: BTreeMap<String, String>,
    pub regions: BTreeMap<String, String>,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub xprime: Vec<String>,
}

impl GluingMap {
    pub fn from_json(text: &str) -> Result<GluingMap, GluingError> {
        Ok(serde_json::from_str(text)?)
    }

    /// The map of `sub` into `sub.disjoint_union(other, left, right)`.
    pub fn for_disjoint_union(sub: &HeegaardDiagram, left: &str, xprime: &[&str], right: &str) -> GluingMap {
        let spec = sub.to_spec();
        GluingMap {
            points: spec.points.keys().map(|p| (p.clone(), format!("{left}{p}"))).collect(),
            regions: spec.regions.iter().map(|r| (r.id.clone(), format!("{left}{}", r.id))).collect(),
            alpha: (0..sub.alpha.len()).collect(),
            beta: (0..sub.beta.len()).collect(),
            xprime: xprime.iter().map(|p| format!("{right}{p}")).collect(),
        }
    }
}

/// Resolved embedding of `sub` into `sup`.
#[derive(Clone, Debug)]
pub struct GluingData {
    pub sub: HeegaardDiagram,
    pub sup: HeegaardDiagram,
    pub points: Vec<usize>,
    pub regions: Vec<usize>,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub xprime: Vec<usize>,
}

fn resolve(
    kind: &'static str,
    ids: impl Iterator<Item = String>,
    table: &BTreeMap<String, String>,
    lookup: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<usize>, GluingError> {
    let mut out = Vec::new();
    let mut used = HashMap::new();
    for id in ids {
        let target = table.get(&id).ok_or_else(|| GluingError::Missing { kind, id: id.clone() })?;
        let t = lookup(target).ok_or_else(|| GluingError::Unknown { kind, id: target.clone() })?;
        if used.insert(t, ()).is_some() {
            return Err(GluingError::NotInjective { kind, id: target.clone() });
        }
        out.push(t);
    }
    Ok(out)
}

impl GluingData {
    pub fn new(sub: HeegaardDiagram, sup: HeegaardDiagram, map: &GluingMap) -> Result<GluingData, GluingError> {
        let points = resolve("point", sub.points.iter().map(|p| p.id.clone()), &map.points, |s| sup.point(s))?;
        let regions = resolve("region", sub.regions.iter().map(|r| r.id.clone()), &map.regions, |s| sup.region(s))?;
        let curves = |kind: &'static str, table: &[usize], n: usize, m: usize| -> Result<Vec<usize>, GluingError> {
            if table.len() != n {
                return Err(GluingError::Missing { kind, id: format!("table of length {n}") });
            }
            let mut seen = vec![false; m];
            for &c in table {
                if c >= m {
                    return Err(GluingError::Unknown { kind, id: c.to_string() });
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(GluingError::NotInjective { kind, id: c.to_string() });
                }
            }
            Ok(table.to_vec())
        };
        let alpha = curves("α-curve", &map.alpha, sub.alpha.len(), sup.alpha.len())?;
        let beta = curves("β-curve", &map.beta, sub.beta.len(), sup.beta.len())?;
        let mut xprime = Vec::new();
        for id in &map.xprime {
            xprime.push(sup.point(id).ok_or_else(|| GluingError::Unknown { kind: "point", id: id.clone() })?);
        }
        let g = GluingData { sub, sup, points, regions, alpha, beta, xprime };
        g.check_xprime()?;
        Ok(g)
    }

    /// x′ must occupy every α- and β-curve outside the image exactly once.
    fn check_xprime(&self) -> Result<(), GluingError> {
        let n = self.sup.alpha.len();
        let mut a_used = vec![false; n];
        let mut b_used = vec![false; n];
        for &c in &self.alpha {
            a_used[c] = true;
        }
        for &c in &self.beta {
            b_used[c] = true;
        }
        for &p in &self.xprime {
            if self.points.contains(&p) {
                return Err(GluingError::BadXPrime(format!("{} lies in the image", self.sup.points[p].id)));
            }
            let pt = &self.sup.points[p];
            if std::mem::replace(&mut a_used[pt.alpha], true) || std::mem::replace(&mut b_used[pt.beta], true) {
                return Err(GluingError::BadXPrime(format!("{} shares a curve with the image or another x′ point", pt.id)));
            }
        }
        if a_used.iter().chain(&b_used).any(|u| !u) {
            return Err(GluingError::BadXPrime("some complementary curve has no x′ point".into()));
        }
        Ok(())
    }

    /// Ways in which the embedding fails to preserve incidence.
    pub fn incidence_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (p, pt) in self.sub.points.iter().enumerate() {
            let img = &self.sup.points[self.points[p]];
            if self.alpha[pt.alpha] != img.alpha || self.beta[pt.beta] != img.beta {
                out.push(format!("point {} changes curves", pt.id));
            }
            for q in Quadrant::ALL {
                if self.regions[pt.region(q)] != img.region(q) {
                    out.push(format!("point {} quadrant {q:?} is not sent to {}", pt.id, img.id));
                }
            }
        }
        for (r, reg) in self.sub.regions.iter().enumerate() {
            let img = &self.sup.regions[self.regions[r]];
            if reg.basepoints != img.basepoints || reg.on_boundary != img.on_boundary || reg.chi != img.chi {
                out.push(format!("region {} differs from {}", reg.id, img.id));
            }
            let mut corners: Vec<(usize, Quadrant)> = reg.corners.iter().map(|&(p, q)| (self.points[p], q)).collect();
            let mut target = img.corners.clone();
            corners.sort();
            target.sort();
            if corners != target {
                out.push(format!("region {} corners differ from {}", reg.id, img.id));
            }
        }
        for (kind, sub_words, sup_words, table) in
            [("α", &self.sub.alpha, &self.sup.alpha, &self.alpha), ("β", &self.sub.beta, &self.sup.beta, &self.beta)]
        {
            for (c, word) in sub_words.iter().enumerate() {
                let mapped: Vec<usize> = word.iter().map(|&p| self.points[p]).collect();
                let target: Vec<usize> = sup_words[table[c]].iter().copied().filter(|p| mapped.contains(p)).collect();
                if !is_rotation(&mapped, &target) {
                    out.push(format!("{kind}{c} point order is not preserved"));
                }
            }
        }
        out
    }

    fn embed_generator(&self, y: &Generator) -> Vec<usize> {
        y.points.iter().map(|&p| self.points[p]).chain(self.xprime.iter().copied()).collect()
    }
}

fn is_rotation(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..b.len()).any(|s| a.iter().zip(b.iter().cycle().skip(s)).all(|(x, y)| x == y)))
}

/// Φ on generators, as indices into the two generator lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub images: Vec<usize>,
    pub sub_dim: usize,
    pub super_dim: usize,
}

impl InducedMap {
    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.super_dim);
        for i in v.ones() {
            out.flip(self.images[i]);
        }
        out
    }

    /// Level-wise extension to filtered elements.
    pub fn apply_element(&self, e: &Element) -> Element {
        Element::from_levels(self.super_dim, e.levels.iter().map(|v| self.apply(v)).collect())
    }

    pub fn preimage(&self, j: usize) -> Option<usize> {
        self.images.iter().position(|&i| i == j)
    }
}

pub fn induced_map(g: &GluingData) -> Result<InducedMap, GluingError> {
    let sub_gens = enumerate_generators(&g.sub);
    let sup_gens = enumerate_generators(&g.sup);
    induced_map_on(g, &sub_gens, &sup_gens)
}

fn induced_map_on(g: &GluingData, sub_gens: &[Generator], sup_gens: &[Generator]) -> Result<InducedMap, GluingError> {
    let index: HashMap<&Generator, usize> = sup_gens.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let images = sub_gens
        .iter()
        .map(|y| {
            let img = Generator::from_points(&g.sup, &g.embed_generator(y))
                .map_err(|e| GluingError::BadXPrime(format!("{}: {e}", g.sub.generator_name(y))))?;
            index.get(&img).copied().ok_or_else(|| GluingError::BadXPrime(g.sup.generator_name(&img)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InducedMap { images, sub_dim: sub_gens.len(), super_dim: sup_gens.len() })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainMapReport {
    pub incidence: Vec<String>,
    /// Disks that do not correspond under the embedding, in either
    /// direction, and odd counts of disks from Φ-images to other generators.
    pub unmatched: Vec<String>,
    pub j_plus: Vec<String>,
    /// (r, sub generator) with Φ∂_r ≠ ∂_rΦ.
    pub commutation: Vec<(usize, String)>,
    pub matched: usize,
}

impl ChainMapReport {
    pub fn passed(&self) -> bool {
        self.incidence.is_empty() && self.unmatched.is_empty() && self.j_plus.is_empty() && self.commutation.is_empty()
    }
}

/// Everything the torsion comparison needs once Φ has been checked.
#[derive(Clone, Debug)]
pub struct VerifiedGluing {
    pub report: ChainMapReport,
    pub phi: InducedMap,
    pub sub: SplitDifferential,
    pub sup: SplitDifferential,
}

pub fn verify_filtered_chain_map(g: &GluingData) -> Result<VerifiedGluing, GluingError> {
    for (which, d) in [("sub", &g.sub), ("super", &g.sup)] {
        if !check_nice(d).is_empty() {
            return Err(GluingError::NotNice { which });
        }
        if !check_admissible(d) {
            return Err(GluingError::NotAdmissible { which });
        }
    }
    let mut report = ChainMapReport { incidence: g.incidence_violations(), ..Default::default() };
    let sub_disks = enumerate_disks(&g.sub)?;
    let sup_disks = enumerate_disks(&g.sup)?;
    let sub = SplitDifferential::from_disks(&g.sub, enumerate_generators(&g.sub), &sub_disks);
    let sup = SplitDifferential::from_disks(&g.sup, enumerate_generators(&g.sup), &sup_disks);
    let phi = induced_map_on(g, &sub.generators, &sup.generators)?;

    let sup_index: HashMap<&Generator, usize> = sup.generators.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let embedded = |k: &CountedDisk| -> (usize, usize, Vec<i64>) {
        let from = sub.generators.iter().position(|x| *x == k.from).expect("sub generator");
        let to = sub.generators.iter().position(|x| *x == k.to).expect("sub generator");
        let mut dom = vec![0; g.sup.regions.len()];
        for (r, &c) in k.domain.coefficients.iter().enumerate() {
            dom[g.regions[r]] = c;
        }
        (phi.images[from], phi.images[to], dom)
    };
    let images: Vec<(usize, usize, Vec<i64>)> = sub_disks.iter().map(embedded).collect();
    let mut hit = vec![false; sub_disks.len()];
    // disks leaving the image only matter when their count is odd
    let mut escaping: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for k in &sup_disks {
        let from = sup_index[&k.from];
        if phi.preimage(from).is_none() {
            continue;
        }
        let to = sup_index[&k.to];
        if phi.preimage(to).is_none() {
            escaping.entry((from, to)).or_default().push(k.name(&g.sup));
            continue;
        }
        match images.iter().position(|(f, t, dom)| *f == from && *t == to && *dom == k.domain.coefficients) {
            Some(i) => {
                hit[i] = true;
                report.matched += 1;
                if sub_disks[i].j_plus != k.j_plus {
                    report.j_plus.push(format!("{}: {} in sub, {} in super", k.name(&g.sup), sub_disks[i].j_plus, k.j_plus));
                }
            }
            None => report.unmatched.push(format!("super disk {} has no sub counterpart", k.name(&g.sup))),
        }
    }
    for ((from, to), names) in escaping {
        if names.len() % 2 == 1 {
            report.unmatched.push(format!(
                "super disks {} from {} to {} leave the image of Φ",
                names.join(", "),
                sup.names[from],
                sup.names[to]
            ));
        }
    }
    for (i, k) in sub_disks.iter().enumerate() {
        if !hit[i] {
            report.unmatched.push(format!("sub disk {} has no super counterpart", k.name(&g.sub)));
        }
    }

    let levels = sub.levels.len().max(sup.levels.len());
    for r in 0..levels {
        for (y, name) in sub.names.iter().enumerate() {
            let e = BitVec::unit(phi.sub_dim, y);
            let lhs = sub.levels.get(r).map(|m| phi.apply(&m.apply(&e))).unwrap_or_else(|| BitVec::zeros(phi.super_dim));
            let img = phi.apply(&e);
            let rhs = sup.levels.get(r).map(|m| m.apply(&img)).unwrap_or_else(|| BitVec::zeros(phi.super_dim));
            if lhs != rhs {
                report.commutation.push((r, name.clone()));
            }
        }
    }
    Ok(VerifiedGluing { report, phi, sub, sup })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtInequalityReport {
    pub sub: AtValue,
    pub sup: AtValue,
    pub verdict: Verdict,
    pub eh_mapped: bool,
    /// Whether Φ of the sub witness certifies the super class at the same
    /// depth; `None` when the sub side has no witness.
    pub transported_witness: Option<bool>,
}

fn bounds(v: &AtValue) -> (usize, usize) {
    match *v {
        AtValue::Finite(k) => (k, k),
        AtValue::Undetermined { at_least } => (at_least, usize::MAX),
        AtValue::Infinite => (usize::MAX, usize::MAX),
    }
}

/// Torsion of both sides and the check AT(sub) ≥ AT(super).
pub fn at_inequality_check(
    sub_fc: &FilteredComplex,
    super_fc: &FilteredComplex,
    phi: &InducedMap,
    opts: &AtOptions,
) -> Result<AtInequalityReport, GluingError> {
    let a = algebraic_torsion(sub_fc, opts)?;
    let b = algebraic_torsion(super_fc, opts)?;
    let eh_mapped = match (sub_fc.eh_vector(), super_fc.eh_vector()) {
        (Some(x), Some(y)) => phi.apply(&x) == y,
        _ => false,
    };
    let transported_witness = a.witness.as_ref().map(|w| {
        let t = phi.apply_element(w);
        let image = super_fc.apply_total(&t);
        eh_mapped && super_fc.eh_vector().is_some_and(|eh| image == Element::at_level(super_fc.dim(), 0, eh))
    });
    let ((sub_lo, sub_hi), (sup_lo, sup_hi)) = (bounds(&a.value), bounds(&b.value));
    let verdict = if a.value == AtValue::Infinite || (sup_hi != usize::MAX && sub_lo >= sup_hi) {
        Verdict::Holds
    } else if sub_hi < sup_lo {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(AtInequalityReport { sub: a.value, sup: b.value, verdict, eh_mapped, transported_witness })
}
