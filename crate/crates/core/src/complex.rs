//! The filtered complex `C = ⊕_{i∈ℕ} CF_i` with total differential
//! `∂̂(c)_j = Σ_i ∂_i c_{i+j}`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::Generator;
use crate::disks::{convolution_failure, Shape, SplitDifferential};
use crate::f2::{BitVec, SparseColumns};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("fixture parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {0:?} listed twice")]
    DuplicateGenerator(String),
    #[error("disk {from} -> {to}: J+ = {jplus} is not a nonnegative even integer")]
    BadJPlus { from: String, to: String, jplus: i64 },
    #[error("disk {from} -> {to}: listed J+ = {listed} but shape and cycle counts give {computed}")]
    JPlusMismatch { from: String, to: String, listed: i64, computed: i64 },
    #[error("convolution identity fails at level n = {0}")]
    Convolution(usize),
    #[error("EH is not a cycle: the J+ = {} part of its differential is nonzero", 2 * .0)]
    EhNotCycle(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromDiagram,
    Fixture,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureGenerator {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureDisk {
    pub from: String,
    pub to: String,
    pub jplus: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Complex-level fixture file.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub generators: Vec<FixtureGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eh: Option<String>,
    pub disks: Vec<FixtureDisk>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    pub names: Vec<String>,
    pub cycles: Vec<Option<usize>>,
    /// `levels[r]` is `∂_r`; rows index targets, columns sources.
    pub levels: Vec<SparseColumns>,
    pub eh: Option<usize>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

/// A finitely supported sequence `(c₀, c₁, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub levels: Vec<BitVec>,
    pub dim: usize,
}

impl Element {
    pub fn zero(dim: usize) -> Element {
        Element { levels: Vec::new(), dim }
    }

    pub fn at_level(dim: usize, p: usize, v: BitVec) -> Element {
        let mut e = Element::zero(dim);
        e.set_level(p, v);
        e
    }

    pub fn from_levels(dim: usize, levels: Vec<BitVec>) -> Element {
        let mut e = Element { levels, dim };
        e.trim();
        e
    }

    pub fn level(&self, i: usize) -> BitVec {
        self.levels.get(i).cloned().unwrap_or_else(|| BitVec::zeros(self.dim))
    }

    pub fn set_level(&mut self, i: usize, v: BitVec) {
        assert_eq!(v.len(), self.dim);
        if self.levels.len() <= i {
            self.levels.resize(i + 1, BitVec::zeros(self.dim));
        }
        self.levels[i] = v;
        self.trim();
    }

    fn trim(&mut self) {
        while self.levels.last().is_some_and(BitVec::is_zero) {
            self.levels.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// Highest nonzero level, if any.
    pub fn degree(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn in_filtration(&self, p: usize) -> bool {
        self.degree().map_or(true, |d| d <= p)
    }

    pub fn add(&self, other: &Element) -> Element {
        let n = self.levels.len().max(other.levels.len());
        let levels = (0..n)
            .map(|i| {
                let mut v = self.level(i);
                v.add_assign(&other.level(i));
                v
            })
            .collect();
        Element::from_levels(self.dim, levels)
    }
}

impl FilteredComplex {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn i_max(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Formal complex from explicit matrices; nothing is verified.
    pub fn from_levels(names: Vec<String>, levels: Vec<SparseColumns>, eh: Option<usize>) -> FilteredComplex {
        let n = names.len();
        let levels = if levels.is_empty() { vec![SparseColumns::zeros(n, n)] } else { levels };
        FilteredComplex {
            cycles: vec![None; n],
            names,
            levels,
            eh,
            provenance: Provenance::Fixture,
            warnings: Vec::new(),
        }
    }

    /// Complex of a diagram; checks `∂̂² = 0` level by level and that EH is
    /// a cycle.
    pub fn from_diagram(sd: &SplitDifferential, eh: Option<&Generator>) -> Result<FilteredComplex, ComplexError> {
        if let Some(n) = sd.convolution_failure() {
            return Err(ComplexError::Convolution(n));
        }
        let eh = match eh {
            Some(g) => Some(
                sd.generators.iter().position(|h| h == g).ok_or_else(|| ComplexError::UnknownGenerator(format!("{:?}", g.points)))?,
            ),
            None => None,
        };
        if let Some(e) = eh {
            if let Some(r) = sd.levels.iter().position(|m| !m.column(e).is_empty()) {
                return Err(ComplexError::EhNotCycle(r));
            }
        }
        Ok(FilteredComplex {
            names: sd.names.clone(),
            cycles: sd.generators.iter().map(|g| Some(g.cycles())).collect(),
            levels: sd.levels.clone(),
            eh,
            provenance: Provenance::FromDiagram,
            warnings: Vec::new(),
        })
    }

    pub fn from_fixture_json(text: &str) -> Result<FilteredComplex, ComplexError> {
        let file: FixtureFile = serde_json::from_str(text).map_err(|e| ComplexError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_fixture(&file)
    }

    /// Formal complex with exactly the listed disks. Repeated disks cancel
    /// in pairs. When a disk carries a shape and both ends carry cycle
    /// counts, the listed J₊ must match the one they determine.
    pub fn from_fixture(file: &FixtureFile) -> Result<FilteredComplex, ComplexError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, g) in file.generators.iter().enumerate() {
            if index.insert(&g.name, i).is_some() {
                return Err(ComplexError::DuplicateGenerator(g.name.clone()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| ComplexError::UnknownGenerator(s.to_string()));
        let n = file.generators.len();
        let mut counts: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for k in &file.disks {
            let (from, to) = (lookup(&k.from)?, lookup(&k.to)?);
            if k.jplus < 0 || k.jplus % 2 != 0 {
                return Err(ComplexError::BadJPlus { from: k.from.clone(), to: k.to.clone(), jplus: k.jplus });
            }
            if let (Some(shape), Some(cx), Some(cy)) = (k.shape, file.generators[from].cycles, file.generators[to].cycles) {
                let computed = fixture_j_plus(shape, cx, cy);
                if computed != k.jplus {
                    return Err(ComplexError::JPlusMismatch {
                        from: k.from.clone(),
                        to: k.to.clone(),
                        listed: k.jplus,
                        computed,
                    });
                }
            }
            *counts.entry(((k.jplus / 2) as usize, from, to)).or_default() += 1;
        }
        let top = counts.keys().map(|k| k.0).max().unwrap_or(0);
        let mut levels = vec![SparseColumns::zeros(n, n); top + 1];
        let mut warnings = Vec::new();
        for (&(r, from, to), &c) in &counts {
            if c > 1 {
                warnings.push(format!(
                    "disk {} -> {} with J+ = {} listed {c} times; counted mod 2",
                    file.generators[from].name,
                    file.generators[to].name,
                    2 * r
                ));
            }
            if c % 2 == 1 {
                levels[r].flip(to, from);
            }
        }
        let eh = file.eh.as_deref().map(lookup).transpose()?;
        Ok(FilteredComplex {
            names: file.generators.iter().map(|g| g.name.clone()).collect(),
            cycles: file.generators.iter().map(|g| g.cycles).collect(),
            levels,
            eh,
            provenance: Provenance::Fixture,
            warnings,
        })
    }

    pub fn convolution_failure(&self) -> Option<usize> {
        convolution_failure(&self.levels)
    }

    /// `∂_r v`.
    pub fn apply_level(&self, r: usize, v: &BitVec) -> BitVec {
        match self.levels.get(r) {
            Some(m) => m.apply(v),
            None => BitVec::zeros(self.dim()),
        }
    }

    /// `∂̂ e`, component `j` being `Σ_i ∂_i c_{i+j}`.
    pub fn apply_total(&self, e: &Element) -> Element {
        let n = self.dim();
        let levels = (0..e.levels.len())
            .map(|j| {
                let mut out = BitVec::zeros(n);
                for (i, m) in self.levels.iter().enumerate() {
                    if let Some(c) = e.levels.get(i + j) {
                        out.add_assign(&m.apply(c));
                    }
                }
                out
            })
            .collect();
        Element::from_levels(n, levels)
    }

    pub fn vector(&self, names: &[&str]) -> Result<BitVec, ComplexError> {
        let mut v = BitVec::zeros(self.dim());
        for s in names {
            let i = self.index_of(s).ok_or_else(|| ComplexError::UnknownGenerator(s.to_string()))?;
            v.flip(i);
        }
        Ok(v)
    }

    pub fn eh_vector(&self) -> Option<BitVec> {
        self.eh.map(|i| BitVec::unit(self.dim(), i))
    }

    pub fn render(&self, v: &BitVec) -> Vec<String> {
        v.ones().map(|i| self.names[i].clone()).collect()
    }

    /// The same complex with generator `i` renamed to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FilteredComplex {
        let n = self.dim();
        let mut names = vec![String::new(); n];
        let mut cycles = vec![None; n];
        for i in 0..n {
            names[perm[i]] = self.names[i].clone();
            cycles[perm[i]] = self.cycles[i];
        }
        let levels = self
            .levels
            .iter()
            .map(|m| SparseColumns::from_entries(n, n, (0..n).flat_map(|j| m.column(j).iter().map(move |&i| (perm[i], perm[j])))))
            .collect();
        FilteredComplex {
            names,
            cycles,
            levels,
            eh: self.eh.map(|e| perm[e]),
            provenance: self.provenance,
            warnings: self.warnings.clone(),
        }
    }
}

/// J₊ of an empty embedded polygon from its shape and the cycle counts of
/// its ends: `2(n_x + n_y)` is 1 for a bigon and 2 for a rectangle.
pub fn fixture_j_plus(shape: Shape, from_cycles: usize, to_cycles: usize) -> i64 {
    let two_n = match shape {
        Shape::Bigon => 1,
        Shape::Rectangle => 2,
    };
    two_n - 1 + from_cycles as i64 - to_cycles as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SMALL: &str = r#"{
      "generators": [{"name": "x", "cycles": 1}, {"name": "y", "cycles": 1}],
      "eh": "x",
      "disks": [{"from": "y", "to": "x", "jplus": 0, "shape": "bigon"}]
    }"#;

    #[test]
    fn small_fixture() {
        let fc = FilteredComplex::from_fixture_json(SMALL).unwrap();
        assert_eq!(fc.provenance, Provenance::Fixture);
        assert_eq!(fc.levels.len(), 1);
        let y = fc.vector(&["y"]).unwrap();
        assert_eq!(fc.render(&fc.apply_level(0, &y)), ["x"]);
    }

    #[test]
    fn duplicate_disk_cancels_with_warning() {
        let text = SMALL.replace(
            r#""disks": [{"from": "y", "to": "x", "jplus": 0, "shape": "bigon"}]"#,
            r#""disks": [{"from": "y", "to": "x", "jplus": 0}, {"from": "y", "to": "x", "jplus": 0}]"#,
        );
        let fc = FilteredComplex::from_fixture_json(&text).unwrap();
        assert!(fc.levels[0].is_zero());
        assert_eq!(fc.warnings.len(), 1);
    }

    #[test]
    fn empty_disk_list_is_zero_differential() {
        let fc = FilteredComplex::from_fixture_json(r#"{"generators": [{"name": "a"}], "eh": "a", "disks": []}"#).unwrap();
        assert_eq!(fc.levels.len(), 1);
        assert!(fc.levels[0].is_zero());
    }

    #[test]
    fn fixture_errors() {
        let unknown = SMALL.replace(r#""to": "x""#, r#""to": "z""#);
        assert!(matches!(FilteredComplex::from_fixture_json(&unknown), Err(ComplexError::UnknownGenerator(_))));
        let odd = SMALL.replace(r#""jplus": 0"#, r#""jplus": 1"#);
        assert!(matches!(FilteredComplex::from_fixture_json(&odd), Err(ComplexError::BadJPlus { .. })));
        let mismatch = SMALL.replace(r#""jplus": 0"#, r#""jplus": 2"#);
        assert!(matches!(FilteredComplex::from_fixture_json(&mismatch), Err(ComplexError::JPlusMismatch { .. })));
        let extra = SMALL.replace(r#""eh": "x","#, r#""eh": "x", "colour": 3,"#);
        assert!(matches!(FilteredComplex::from_fixture_json(&extra), Err(ComplexError::Parse { .. })));
    }

    #[test]
    fn apply_total_mixes_levels() {
        // ∂₀ b = a, ∂₁ c = a
        let names = vec!["a".to_string(), "b".into(), "c".into()];
        let l0 = SparseColumns::from_entries(3, 3, [(0, 1)]);
        let l1 = SparseColumns::from_entries(3, 3, [(0, 2)]);
        let fc = FilteredComplex::from_levels(names, vec![l0, l1], Some(0));
        let e = Element::from_levels(3, vec![fc.vector(&["b"]).unwrap(), fc.vector(&["c"]).unwrap()]);
        // level 0: ∂₀b + ∂₁c = 0; level 1: ∂₀c = 0
        assert!(fc.apply_total(&e).is_zero());
        let e2 = Element::at_level(3, 1, fc.vector(&["c"]).unwrap());
        assert_eq!(fc.apply_total(&e2), Element::at_level(3, 0, fc.vector(&["a"]).unwrap()));
        assert!(fc.apply_total(&Element::zero(3)).is_zero());
    }

    fn random_complex(entries: &[(usize, usize, usize)]) -> FilteredComplex {
        let n = 5;
        let mut levels = vec![SparseColumns::zeros(n, n); 3];
        for &(r, i, j) in entries {
            levels[r].flip(i, j);
        }
        FilteredComplex::from_levels((0..n).map(|i| format!("g{i}")).collect(), levels, None)
    }

    proptest! {
        #[test]
        fn total_differential_preserves_filtration(
            entries in proptest::collection::vec((0usize..3, 0usize..5, 0usize..5), 0..12),
            bits in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 5), 0..5),
        ) {
            let fc = random_complex(&entries);
            let levels = bits.iter().map(|b| BitVec::from_indices(5, (0..5).filter(|&i| b[i]))).collect();
            let e = Element::from_levels(5, levels);
            let p = e.degree().unwrap_or(0);
            prop_assert!(fc.apply_total(&e).in_filtration(p));
        }

        #[test]
        fn square_zero_when_convolution_holds(
            entries in proptest::collection::vec((0usize..3, 0usize..5, 0usize..5), 0..8),
            bits in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 5), 0..4),
        ) {
            let fc = random_complex(&entries);
            let levels = bits.iter().map(|b| BitVec::from_indices(5, (0..5).filter(|&i| b[i]))).collect();
            let e = Element::from_levels(5, levels);
            if fc.convolution_failure().is_none() {
                prop_assert!(fc.apply_total(&fc.apply_total(&e)).is_zero());
            }
        }
    }
}
