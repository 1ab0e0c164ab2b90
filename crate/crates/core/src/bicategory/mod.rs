//! Finite bicategories with exhaustive coherence validation, normal lax
//! functors and icons, the Duskin nerve, and the Lack-Paoli 2-nerve.

mod lax;
mod lp;

pub use lax::{
    duskin_nerve, enumerate_icons, enumerate_normal_homs, enumerate_normal_lax, icon_identity,
    pair_le_index, pair_lt_index, pairs_le, pairs_lt, triple_le_index, triples_le, NormalLax,
};
pub use lp::{check_lp_characterization, lp_2nerve, lp_bisimplicial, LpConditionReport, LpReport};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::FinCategory;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BicatError {
    #[error("{0}")]
    Malformed(String),
    #[error("vertical category structure fails: {witness}")]
    VerticalStructure { witness: String },
    #[error("interchange fails: {witness}")]
    InterchangeViolation { witness: String },
    #[error("pentagon fails: {witness}")]
    PentagonViolation { witness: String },
    #[error("triangle fails: {witness}")]
    TriangleViolation { witness: String },
    #[error("constraint cell not invertible: {witness}")]
    NonInvertibleConstraint { witness: String },
    #[error("naturality fails: {witness}")]
    NaturalityViolation { witness: String },
}

/// Partial binary table over cell indices, dense storage.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Table2 {
    stride: usize,
    data: Vec<u32>,
}

const UNDEF: u32 = u32::MAX;

impl Table2 {
    fn new(rows: usize, cols: usize) -> Self {
        Table2 { stride: cols, data: vec![UNDEF; rows * cols] }
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        match self.data[a * self.stride + b] {
            UNDEF => None,
            v => Some(v as usize),
        }
    }

    fn set(&mut self, a: usize, b: usize, v: usize) -> bool {
        let slot = &mut self.data[a * self.stride + b];
        let fresh = *slot == UNDEF;
        *slot = v as u32;
        fresh
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellInfo {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// Raw bicategory data, as accepted by `FinBicategory::validate` and by the
/// JSON format. All references are by cell id.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBicategory {
    pub objects: Vec<String>,
    /// (id, src object, tgt object)
    pub one_cells: Vec<(String, String, String)>,
    /// (id, src 1-cell, tgt 1-cell)
    pub two_cells: Vec<(String, String, String)>,
    /// object → identity 1-cell
    pub id_one: BTreeMap<String, String>,
    /// 1-cell → identity 2-cell
    pub id_two: BTreeMap<String, String>,
    /// (b, a, b·a): vertical composition, a: f⇒g, b: g⇒h
    pub vcomp: Vec<(String, String, String)>,
    /// (f, g, f∘g): composition of 1-cells, g: C→B, f: B→A
    pub hcomp_one: Vec<(String, String, String)>,
    /// (a, b, a∘b): horizontal composition of 2-cells, a over the left factor
    pub hcomp_two: Vec<(String, String, String)>,
    /// (f, g, h, α): associator component (f∘g)∘h ⇒ f∘(g∘h)
    pub associator: Vec<(String, String, String, String)>,
    /// f → λ_f: i∘f ⇒ f
    pub lunitor: BTreeMap<String, String>,
    /// f → ρ_f: f∘i ⇒ f
    pub runitor: BTreeMap<String, String>,
}

/// A finite bicategory with validated coherence. Hom-categories are finite,
/// composition tables are total on composable cells, and the pentagon and
/// triangle identities hold exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinBicategory {
    objects: Vec<String>,
    one_cells: Vec<CellInfo>,
    two_cells: Vec<CellInfo>,
    id_one: Vec<usize>,
    id_two: Vec<usize>,
    vcomp: Table2,
    hcomp_one: Table2,
    hcomp_two: Table2,
    associator: BTreeMap<(usize, usize, usize), usize>,
    lunitor: Vec<usize>,
    runitor: Vec<usize>,
    two_inverse: Vec<Option<usize>>,
}

impl FinBicategory {
    pub fn validate(raw: &RawBicategory) -> Result<Self, BicatError> {
        let mut objects = raw.objects.clone();
        objects.sort();
        if objects.windows(2).any(|w| w[0] == w[1]) {
            return Err(BicatError::Malformed("duplicate object".into()));
        }
        let obj_idx: BTreeMap<&str, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let look =
            |m: &BTreeMap<&str, usize>, id: &str, what: &str| -> Result<usize, BicatError> {
                m.get(id)
                    .copied()
                    .ok_or_else(|| BicatError::Malformed(format!("unknown {what} `{id}`")))
            };

        let mut one_cells: Vec<CellInfo> = Vec::new();
        for (id, s, t) in &raw.one_cells {
            one_cells.push(CellInfo {
                id: id.clone(),
                src: look(&obj_idx, s, "object")?,
                tgt: look(&obj_idx, t, "object")?,
            });
        }
        one_cells.sort_by(|a, b| a.id.cmp(&b.id));
        if one_cells.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(BicatError::Malformed("duplicate 1-cell".into()));
        }
        let one_idx: BTreeMap<&str, usize> =
            one_cells.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();

        let mut two_cells: Vec<CellInfo> = Vec::new();
        for (id, s, t) in &raw.two_cells {
            let src = look(&one_idx, s, "1-cell")?;
            let tgt = look(&one_idx, t, "1-cell")?;
            if one_cells[src].src != one_cells[tgt].src || one_cells[src].tgt != one_cells[tgt].tgt
            {
                return Err(BicatError::Malformed(format!("2-cell `{id}` is not parallel")));
            }
            two_cells.push(CellInfo { id: id.clone(), src, tgt });
        }
        two_cells.sort_by(|a, b| a.id.cmp(&b.id));
        if two_cells.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(BicatError::Malformed("duplicate 2-cell".into()));
        }
        let two_idx: BTreeMap<&str, usize> =
            two_cells.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();

        let mut id_one = vec![usize::MAX; objects.len()];
        for (o, f) in &raw.id_one {
            id_one[look(&obj_idx, o, "object")?] = look(&one_idx, f, "1-cell")?;
        }
        for (o, &f) in id_one.iter().enumerate() {
            if f == usize::MAX {
                return Err(BicatError::Malformed(format!(
                    "no identity 1-cell for `{}`",
                    objects[o]
                )));
            }
            if one_cells[f].src != o || one_cells[f].tgt != o {
                return Err(BicatError::Malformed(format!(
                    "identity 1-cell of `{}` is not an endo-cell",
                    objects[o]
                )));
            }
        }
        let mut id_two = vec![usize::MAX; one_cells.len()];
        for (f, a) in &raw.id_two {
            id_two[look(&one_idx, f, "1-cell")?] = look(&two_idx, a, "2-cell")?;
        }
        for (f, &a) in id_two.iter().enumerate() {
            if a == usize::MAX {
                return Err(BicatError::Malformed(format!(
                    "no identity 2-cell for `{}`",
                    one_cells[f].id
                )));
            }
            if two_cells[a].src != f || two_cells[a].tgt != f {
                return Err(BicatError::Malformed(format!(
                    "identity 2-cell of `{}` is not an endo-cell",
                    one_cells[f].id
                )));
            }
        }

        let mut vcomp = Table2::new(two_cells.len(), two_cells.len());
        for (b, a, ba) in &raw.vcomp {
            let b = look(&two_idx, b, "2-cell")?;
            let a = look(&two_idx, a, "2-cell")?;
            let ba = look(&two_idx, ba, "2-cell")?;
            if !vcomp.set(b, a, ba) {
                return Err(BicatError::Malformed(format!(
                    "duplicate vcomp entry ({}, {})",
                    two_cells[b].id, two_cells[a].id
                )));
            }
        }
        let mut hcomp_one = Table2::new(one_cells.len(), one_cells.len());
        for (f, g, fg) in &raw.hcomp_one {
            let f = look(&one_idx, f, "1-cell")?;
            let g = look(&one_idx, g, "1-cell")?;
            let fg = look(&one_idx, fg, "1-cell")?;
            if !hcomp_one.set(f, g, fg) {
                return Err(BicatError::Malformed(format!(
                    "duplicate hcomp entry ({}, {})",
                    one_cells[f].id, one_cells[g].id
                )));
            }
        }
        let mut hcomp_two = Table2::new(two_cells.len(), two_cells.len());
        for (a, b, ab) in &raw.hcomp_two {
            let a = look(&two_idx, a, "2-cell")?;
            let b = look(&two_idx, b, "2-cell")?;
            let ab = look(&two_idx, ab, "2-cell")?;
            if !hcomp_two.set(a, b, ab) {
                return Err(BicatError::Malformed(format!(
                    "duplicate hcomp2 entry ({}, {})",
                    two_cells[a].id, two_cells[b].id
                )));
            }
        }
        let mut associator = BTreeMap::new();
        for (f, g, h, al) in &raw.associator {
            let key = (
                look(&one_idx, f, "1-cell")?,
                look(&one_idx, g, "1-cell")?,
                look(&one_idx, h, "1-cell")?,
            );
            if associator.insert(key, look(&two_idx, al, "2-cell")?).is_some() {
                return Err(BicatError::Malformed("duplicate associator entry".into()));
            }
        }
        let mut lunitor = vec![usize::MAX; one_cells.len()];
        for (f, l) in &raw.lunitor {
            lunitor[look(&one_idx, f, "1-cell")?] = look(&two_idx, l, "2-cell")?;
        }
        let mut runitor = vec![usize::MAX; one_cells.len()];
        for (f, r) in &raw.runitor {
            runitor[look(&one_idx, f, "1-cell")?] = look(&two_idx, r, "2-cell")?;
        }
        if let Some(f) = lunitor.iter().position(|&v| v == usize::MAX) {
            return Err(BicatError::Malformed(format!("no lunitor for `{}`", one_cells[f].id)));
        }
        if let Some(f) = runitor.iter().position(|&v| v == usize::MAX) {
            return Err(BicatError::Malformed(format!("no runitor for `{}`", one_cells[f].id)));
        }

        let mut b = FinBicategory {
            objects,
            one_cells,
            two_cells,
            id_one,
            id_two,
            vcomp,
            hcomp_one,
            hcomp_two,
            associator,
            lunitor,
            runitor,
            two_inverse: Vec::new(),
        };
        b.check_vertical()?;
        b.check_horizontal()?;
        b.two_inverse = (0..b.two_cells.len()).map(|a| b.find_inverse(a)).collect();
        b.check_constraints()?;
        b.check_pentagon_triangle()?;
        Ok(b)
    }

    // -- structural checks ---------------------------------------------------

    fn check_vertical(&self) -> Result<(), BicatError> {
        let n = self.two_cells.len();
        for b in 0..n {
            for a in 0..n {
                let composable = self.two_cells[a].tgt == self.two_cells[b].src;
                match self.vcomp.get(b, a) {
                    Some(ba) if composable => {
                        if self.two_cells[ba].src != self.two_cells[a].src
                            || self.two_cells[ba].tgt != self.two_cells[b].tgt
                        {
                            return Err(BicatError::VerticalStructure {
                                witness: format!(
                                    "({}, {}) composes to ill-typed {}",
                                    self.two_cells[b].id, self.two_cells[a].id, self.two_cells[ba].id
                                ),
                            });
                        }
                    }
                    Some(_) => {
                        return Err(BicatError::VerticalStructure {
                            witness: format!(
                                "({}, {}) not vertically composable but has a composite",
                                self.two_cells[b].id, self.two_cells[a].id
                            ),
                        })
                    }
                    None if composable => {
                        return Err(BicatError::VerticalStructure {
                            witness: format!(
                                "missing vertical composite ({}, {})",
                                self.two_cells[b].id, self.two_cells[a].id
                            ),
                        })
                    }
                    None => {}
                }
            }
        }
        for a in 0..n {
            let (s, t) = (self.two_cells[a].src, self.two_cells[a].tgt);
            if self.vcomp.get(a, self.id_two[s]) != Some(a)
                || self.vcomp.get(self.id_two[t], a) != Some(a)
            {
                return Err(BicatError::VerticalStructure {
                    witness: format!("identity 2-cell law fails at {}", self.two_cells[a].id),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.two_cells[a].tgt != self.two_cells[b].src {
                    continue;
                }
                for c in 0..n {
                    if self.two_cells[b].tgt != self.two_cells[c].src {
                        continue;
                    }
                    let left = self.vcomp.get(c, self.vcomp.get(b, a).unwrap()).unwrap();
                    let right = self.vcomp.get(self.vcomp.get(c, b).unwrap(), a).unwrap();
                    if left != right {
                        return Err(BicatError::VerticalStructure {
                            witness: format!(
                                "associativity fails at ({}, {}, {})",
                                self.two_cells[c].id, self.two_cells[b].id, self.two_cells[a].id
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_horizontal(&self) -> Result<(), BicatError> {
        // 1-cell composition: totality and typing.
        for f in 0..self.one_cells.len() {
            for g in 0..self.one_cells.len() {
                let composable = self.one_cells[g].tgt == self.one_cells[f].src;
                match self.hcomp_one.get(f, g) {
                    Some(fg) if composable => {
                        if self.one_cells[fg].src != self.one_cells[g].src
                            || self.one_cells[fg].tgt != self.one_cells[f].tgt
                        {
                            return Err(BicatError::Malformed(format!(
                                "ill-typed 1-cell composite ({}, {})",
                                self.one_cells[f].id, self.one_cells[g].id
                            )));
                        }
                    }
                    Some(_) => {
                        return Err(BicatError::Malformed(format!(
                            "non-composable 1-cells ({}, {}) have a composite",
                            self.one_cells[f].id, self.one_cells[g].id
                        )))
                    }
                    None if composable => {
                        return Err(BicatError::Malformed(format!(
                            "missing 1-cell composite ({}, {})",
                            self.one_cells[f].id, self.one_cells[g].id
                        )))
                    }
                    None => {}
                }
            }
        }
        // 2-cell horizontal composition: totality, typing, functoriality.
        let n2 = self.two_cells.len();
        for a in 0..n2 {
            for b in 0..n2 {
                let fa = &self.two_cells[a];
                let fb = &self.two_cells[b];
                let composable =
                    self.one_cells[fb.src].tgt == self.one_cells[fa.src].src;
                match self.hcomp_two.get(a, b) {
                    Some(ab) if composable => {
                        let want_src = self.hcomp_one.get(fa.src, fb.src).unwrap();
                        let want_tgt = self.hcomp_one.get(fa.tgt, fb.tgt).unwrap();
                        if self.two_cells[ab].src != want_src || self.two_cells[ab].tgt != want_tgt
                        {
                            return Err(BicatError::Malformed(format!(
                                "ill-typed horizontal composite ({}, {})",
                                fa.id, fb.id
                            )));
                        }
                    }
                    Some(_) => {
                        return Err(BicatError::Malformed(format!(
                            "non-composable 2-cells ({}, {}) have a horizontal composite",
                            fa.id, fb.id
                        )))
                    }
                    None if composable => {
                        return Err(BicatError::Malformed(format!(
                            "missing horizontal composite ({}, {})",
                            fa.id, fb.id
                        )))
                    }
                    None => {}
                }
            }
        }
        // Identity preservation.
        for f in 0..self.one_cells.len() {
            for g in 0..self.one_cells.len() {
                if self.one_cells[g].tgt != self.one_cells[f].src {
                    continue;
                }
                let fg = self.hcomp_one.get(f, g).unwrap();
                if self.hcomp_two.get(self.id_two[f], self.id_two[g]) != Some(self.id_two[fg]) {
                    return Err(BicatError::InterchangeViolation {
                        witness: format!(
                            "id2({}) ∘ id2({}) != id2({})",
                            self.one_cells[f].id, self.one_cells[g].id, self.one_cells[fg].id
                        ),
                    });
                }
            }
        }
        // Interchange.
        for a in 0..n2 {
            for a2 in 0..n2 {
                if self.two_cells[a].tgt != self.two_cells[a2].src {
                    continue;
                }
                for b in 0..n2 {
                    if self.one_cells[self.two_cells[b].src].tgt
                        != self.one_cells[self.two_cells[a].src].src
                    {
                        continue;
                    }
                    for b2 in 0..n2 {
                        if self.two_cells[b].tgt != self.two_cells[b2].src {
                            continue;
                        }
                        let va = self.vcomp.get(a2, a).unwrap();
                        let vb = self.vcomp.get(b2, b).unwrap();
                        let lhs = self.hcomp_two.get(va, vb).unwrap();
                        let h1 = self.hcomp_two.get(a, b).unwrap();
                        let h2 = self.hcomp_two.get(a2, b2).unwrap();
                        let rhs = self.vcomp.get(h2, h1).unwrap();
                        if lhs != rhs {
                            return Err(BicatError::InterchangeViolation {
                                witness: format!(
                                    "({}, {}, {}, {})",
                                    self.two_cells[a2].id,
                                    self.two_cells[a].id,
                                    self.two_cells[b2].id,
                                    self.two_cells[b].id
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_constraints(&self) -> Result<(), BicatError> {
        // Associator components: defined, typed, invertible, natural.
        for f in 0..self.one_cells.len() {
            for g in 0..self.one_cells.len() {
                if self.one_cells[g].tgt != self.one_cells[f].src {
                    continue;
                }
                for h in 0..self.one_cells.len() {
                    if self.one_cells[h].tgt != self.one_cells[g].src {
                        continue;
                    }
                    let fg = self.hcomp_one.get(f, g).unwrap();
                    let gh = self.hcomp_one.get(g, h).unwrap();
                    let lhs = self.hcomp_one.get(fg, h).unwrap();
                    let rhs = self.hcomp_one.get(f, gh).unwrap();
                    let al = *self.associator.get(&(f, g, h)).ok_or_else(|| {
                        BicatError::Malformed(format!(
                            "missing associator ({}, {}, {})",
                            self.one_cells[f].id, self.one_cells[g].id, self.one_cells[h].id
                        ))
                    })?;
                    if self.two_cells[al].src != lhs || self.two_cells[al].tgt != rhs {
                        return Err(BicatError::Malformed(format!(
                            "associator ({}, {}, {}) is not (f∘g)∘h ⇒ f∘(g∘h)",
                            self.one_cells[f].id, self.one_cells[g].id, self.one_cells[h].id
                        )));
                    }
                    if self.two_inverse[al].is_none() {
                        return Err(BicatError::NonInvertibleConstraint {
                            witness: format!(
                                "associator ({}, {}, {})",
                                self.one_cells[f].id, self.one_cells[g].id, self.one_cells[h].id
                            ),
                        });
                    }
                }
            }
        }
        // Unitors: typed, invertible.
        for f in 0..self.one_cells.len() {
            let l = self.lunitor[f];
            let i_t = self.id_one[self.one_cells[f].tgt];
            let i_s = self.id_one[self.one_cells[f].src];
            if self.two_cells[l].src != self.hcomp_one.get(i_t, f).unwrap()
                || self.two_cells[l].tgt != f
            {
                return Err(BicatError::Malformed(format!(
                    "lunitor of `{}` is not i∘f ⇒ f",
                    self.one_cells[f].id
                )));
            }
            let r = self.runitor[f];
            if self.two_cells[r].src != self.hcomp_one.get(f, i_s).unwrap()
                || self.two_cells[r].tgt != f
            {
                return Err(BicatError::Malformed(format!(
                    "runitor of `{}` is not f∘i ⇒ f",
                    self.one_cells[f].id
                )));
            }
            for c in [l, r] {
                if self.two_inverse[c].is_none() {
                    return Err(BicatError::NonInvertibleConstraint {
                        witness: format!("unitor of `{}`", self.one_cells[f].id),
                    });
                }
            }
        }
        // Naturality of the associator.
        let n2 = self.two_cells.len();
        for a in 0..n2 {
            for b in 0..n2 {
                if !self.h_composable(a, b) {
                    continue;
                }
                for c in 0..n2 {
                    if !self.h_composable(b, c) {
                        continue;
                    }
                    let (f, g, h) =
                        (self.two_cells[a].src, self.two_cells[b].src, self.two_cells[c].src);
                    let (f2, g2, h2) =
                        (self.two_cells[a].tgt, self.two_cells[b].tgt, self.two_cells[c].tgt);
                    let ab_c = self
                        .hcomp_two
                        .get(self.hcomp_two.get(a, b).unwrap(), c)
                        .unwrap();
                    let a_bc = self
                        .hcomp_two
                        .get(a, self.hcomp_two.get(b, c).unwrap())
                        .unwrap();
                    let al1 = self.associator[&(f, g, h)];
                    let al2 = self.associator[&(f2, g2, h2)];
                    let lhs = self.vcomp.get(al2, ab_c).unwrap();
                    let rhs = self.vcomp.get(a_bc, al1).unwrap();
                    if lhs != rhs {
                        return Err(BicatError::NaturalityViolation {
                            witness: format!(
                                "associator at ({}, {}, {})",
                                self.two_cells[a].id, self.two_cells[b].id, self.two_cells[c].id
                            ),
                        });
                    }
                }
            }
        }
        // Naturality of the unitors.
        for a in 0..n2 {
            let f = self.two_cells[a].src;
            let f2 = self.two_cells[a].tgt;
            let i_t = self.id_one[self.one_cells[f].tgt];
            let i_s = self.id_one[self.one_cells[f].src];
            let lhs = self
                .vcomp
                .get(self.lunitor[f2], self.hcomp_two.get(self.id_two[i_t], a).unwrap())
                .unwrap();
            let rhs = self.vcomp.get(a, self.lunitor[f]).unwrap();
            if lhs != rhs {
                return Err(BicatError::NaturalityViolation {
                    witness: format!("lunitor at {}", self.two_cells[a].id),
                });
            }
            let lhs = self
                .vcomp
                .get(self.runitor[f2], self.hcomp_two.get(a, self.id_two[i_s]).unwrap())
                .unwrap();
            let rhs = self.vcomp.get(a, self.runitor[f]).unwrap();
            if lhs != rhs {
                return Err(BicatError::NaturalityViolation {
                    witness: format!("runitor at {}", self.two_cells[a].id),
                });
            }
        }
        Ok(())
    }

    fn check_pentagon_triangle(&self) -> Result<(), BicatError> {
        let n1 = self.one_cells.len();
        // Pentagon: α_{f,g,h∘k} · α_{f∘g,h,k} = (1_f ∘ α_{g,h,k}) · α_{f,g∘h,k} · (α_{f,g,h} ∘ 1_k).
        for f in 0..n1 {
            for g in 0..n1 {
                if self.one_cells[g].tgt != self.one_cells[f].src {
                    continue;
                }
                for h in 0..n1 {
                    if self.one_cells[h].tgt != self.one_cells[g].src {
                        continue;
                    }
                    for k in 0..n1 {
                        if self.one_cells[k].tgt != self.one_cells[h].src {
                            continue;
                        }
                        let fg = self.hcomp_one.get(f, g).unwrap();
                        let gh = self.hcomp_one.get(g, h).unwrap();
                        let hk = self.hcomp_one.get(h, k).unwrap();
                        let lhs = self
                            .vcomp
                            .get(self.associator[&(f, g, hk)], self.associator[&(fg, h, k)])
                            .unwrap();
                        let step1 = self
                            .hcomp_two
                            .get(self.associator[&(f, g, h)], self.id_two[k])
                            .unwrap();
                        let step2 = self.associator[&(f, gh, k)];
                        let step3 = self
                            .hcomp_two
                            .get(self.id_two[f], self.associator[&(g, h, k)])
                            .unwrap();
                        let rhs = self
                            .vcomp
                            .get(step3, self.vcomp.get(step2, step1).unwrap())
                            .unwrap();
                        if lhs != rhs {
                            return Err(BicatError::PentagonViolation {
                                witness: format!(
                                    "({}, {}, {}, {})",
                                    self.one_cells[f].id,
                                    self.one_cells[g].id,
                                    self.one_cells[h].id,
                                    self.one_cells[k].id
                                ),
                            });
                        }
                    }
                }
            }
        }
        // Triangle: (1_f ∘ λ_g) · α_{f,i,g} = ρ_f ∘ 1_g.
        for f in 0..n1 {
            for g in 0..n1 {
                if self.one_cells[g].tgt != self.one_cells[f].src {
                    continue;
                }
                let i = self.id_one[self.one_cells[f].src];
                let lhs = self
                    .vcomp
                    .get(
                        self.hcomp_two.get(self.id_two[f], self.lunitor[g]).unwrap(),
                        self.associator[&(f, i, g)],
                    )
                    .unwrap();
                let rhs = self.hcomp_two.get(self.runitor[f], self.id_two[g]).unwrap();
                if lhs != rhs {
                    return Err(BicatError::TriangleViolation {
                        witness: format!("({}, {})", self.one_cells[f].id, self.one_cells[g].id),
                    });
                }
            }
        }
        Ok(())
    }

    fn find_inverse(&self, a: usize) -> Option<usize> {
        let (s, t) = (self.two_cells[a].src, self.two_cells[a].tgt);
        (0..self.two_cells.len()).find(|&b| {
            self.two_cells[b].src == t
                && self.two_cells[b].tgt == s
                && self.vcomp.get(b, a) == Some(self.id_two[s])
                && self.vcomp.get(a, b) == Some(self.id_two[t])
        })
    }

    fn h_composable(&self, a: usize, b: usize) -> bool {
        self.one_cells[self.two_cells[b].src].tgt == self.one_cells[self.two_cells[a].src].src
    }

    // -- accessors ------------------------------------------------------------

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_id(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn one_cell_count(&self) -> usize {
        self.one_cells.len()
    }

    pub fn one_cell(&self, f: usize) -> &CellInfo {
        &self.one_cells[f]
    }

    pub fn two_cell_count(&self) -> usize {
        self.two_cells.len()
    }

    pub fn two_cell(&self, a: usize) -> &CellInfo {
        &self.two_cells[a]
    }

    pub fn id_one(&self, o: usize) -> usize {
        self.id_one[o]
    }

    pub fn id_two(&self, f: usize) -> usize {
        self.id_two[f]
    }

    /// 1-cells `src → tgt`.
    pub fn hom_one(&self, src: usize, tgt: usize) -> Vec<usize> {
        (0..self.one_cells.len())
            .filter(|&f| self.one_cells[f].src == src && self.one_cells[f].tgt == tgt)
            .collect()
    }

    /// 2-cells `f ⇒ g`.
    pub fn hom_two(&self, f: usize, g: usize) -> Vec<usize> {
        (0..self.two_cells.len())
            .filter(|&a| self.two_cells[a].src == f && self.two_cells[a].tgt == g)
            .collect()
    }

    /// Vertical composite `b · a` for `a: f⇒g`, `b: g⇒h`.
    pub fn vc(&self, b: usize, a: usize) -> usize {
        self.vcomp.get(b, a).expect("vertically composable")
    }

    /// Horizontal composite of 1-cells `f ∘ g` for `g: C→B`, `f: B→A`.
    pub fn hc1(&self, f: usize, g: usize) -> usize {
        self.hcomp_one.get(f, g).expect("composable 1-cells")
    }

    /// Horizontal composite of 2-cells, left factor first.
    pub fn hc2(&self, a: usize, b: usize) -> usize {
        self.hcomp_two.get(a, b).expect("composable 2-cells")
    }

    pub fn alpha(&self, f: usize, g: usize, h: usize) -> usize {
        self.associator[&(f, g, h)]
    }

    pub fn lunit(&self, f: usize) -> usize {
        self.lunitor[f]
    }

    pub fn runit(&self, f: usize) -> usize {
        self.runitor[f]
    }

    pub fn inv2(&self, a: usize) -> Option<usize> {
        self.two_inverse[a]
    }

    /// Right whiskering `β ∘ f` (horizontal composite with the identity on f).
    pub fn whisker_r(&self, beta: usize, f: usize) -> usize {
        self.hc2(beta, self.id_two[f])
    }

    /// Left whiskering `f ∘ β`.
    pub fn whisker_l(&self, f: usize, beta: usize) -> usize {
        self.hc2(self.id_two[f], beta)
    }

    /// The locally discrete bicategory on a category: 2-cells are the
    /// identities, all constraint cells are identities.
    pub fn locally_discrete(c: &FinCategory) -> Self {
        let objects: Vec<String> = c.objects().to_vec();
        let one_cells: Vec<(String, String, String)> = (0..c.arrow_count())
            .map(|a| {
                (
                    c.arrow(a).id.clone(),
                    c.object_id(c.src(a)).to_string(),
                    c.object_id(c.tgt(a)).to_string(),
                )
            })
            .collect();
        let two = |a: usize| format!("id[{}]", c.arrow(a).id);
        let two_cells: Vec<(String, String, String)> = (0..c.arrow_count())
            .map(|a| (two(a), c.arrow(a).id.clone(), c.arrow(a).id.clone()))
            .collect();
        let id_one: BTreeMap<String, String> = (0..c.object_count())
            .map(|o| (c.object_id(o).to_string(), c.arrow(c.identity_of(o)).id.clone()))
            .collect();
        let id_two: BTreeMap<String, String> =
            (0..c.arrow_count()).map(|a| (c.arrow(a).id.clone(), two(a))).collect();
        let mut vcomp = Vec::new();
        let mut hcomp_one = Vec::new();
        let mut hcomp_two = Vec::new();
        let mut associator = Vec::new();
        for a in 0..c.arrow_count() {
            vcomp.push((two(a), two(a), two(a)));
        }
        for f in 0..c.arrow_count() {
            for g in 0..c.arrow_count() {
                if c.tgt(g) == c.src(f) {
                    let fg = c.comp(f, g);
                    hcomp_one.push((
                        c.arrow(f).id.clone(),
                        c.arrow(g).id.clone(),
                        c.arrow(fg).id.clone(),
                    ));
                    hcomp_two.push((two(f), two(g), two(fg)));
                    for h in 0..c.arrow_count() {
                        if c.tgt(h) == c.src(g) {
                            let fgh = c.comp(fg, h);
                            associator.push((
                                c.arrow(f).id.clone(),
                                c.arrow(g).id.clone(),
                                c.arrow(h).id.clone(),
                                two(fgh),
                            ));
                        }
                    }
                }
            }
        }
        let lunitor: BTreeMap<String, String> =
            (0..c.arrow_count()).map(|a| (c.arrow(a).id.clone(), two(a))).collect();
        let runitor = lunitor.clone();
        let raw = RawBicategory {
            objects,
            one_cells,
            two_cells,
            id_one,
            id_two,
            vcomp,
            hcomp_one,
            hcomp_two,
            associator,
            lunitor,
            runitor,
        };
        FinBicategory::validate(&raw).expect("locally discrete bicategory is valid")
    }

    pub fn to_raw(&self) -> RawBicategory {
        let oid = |f: usize| self.one_cells[f].id.clone();
        let tid = |a: usize| self.two_cells[a].id.clone();
        let mut vcomp = Vec::new();
        for b in 0..self.two_cells.len() {
            for a in 0..self.two_cells.len() {
                if let Some(ba) = self.vcomp.get(b, a) {
                    vcomp.push((tid(b), tid(a), tid(ba)));
                }
            }
        }
        let mut hcomp_one = Vec::new();
        for f in 0..self.one_cells.len() {
            for g in 0..self.one_cells.len() {
                if let Some(fg) = self.hcomp_one.get(f, g) {
                    hcomp_one.push((oid(f), oid(g), oid(fg)));
                }
            }
        }
        let mut hcomp_two = Vec::new();
        for a in 0..self.two_cells.len() {
            for b in 0..self.two_cells.len() {
                if let Some(ab) = self.hcomp_two.get(a, b) {
                    hcomp_two.push((tid(a), tid(b), tid(ab)));
                }
            }
        }
        RawBicategory {
            objects: self.objects.clone(),
            one_cells: self
                .one_cells
                .iter()
                .map(|c| {
                    (c.id.clone(), self.objects[c.src].clone(), self.objects[c.tgt].clone())
                })
                .collect(),
            two_cells: self
                .two_cells
                .iter()
                .map(|c| (c.id.clone(), oid(c.src), oid(c.tgt)))
                .collect(),
            id_one: (0..self.objects.len())
                .map(|o| (self.objects[o].clone(), oid(self.id_one[o])))
                .collect(),
            id_two: (0..self.one_cells.len()).map(|f| (oid(f), tid(self.id_two[f]))).collect(),
            vcomp,
            hcomp_one,
            hcomp_two,
            associator: self
                .associator
                .iter()
                .map(|(&(f, g, h), &al)| (oid(f), oid(g), oid(h), tid(al)))
                .collect(),
            lunitor: (0..self.one_cells.len()).map(|f| (oid(f), tid(self.lunitor[f]))).collect(),
            runitor: (0..self.one_cells.len()).map(|f| (oid(f), tid(self.runitor[f]))).collect(),
        }
    }
}
