//! Principal bundles: functors from a finite category into sheaves on a
//! space, the stalkwise filtering conditions, s-étale categories and the
//! Grothendieck construction, principal simplicial sets, and augmented
//! linear orders.

mod augment;
mod setale;
mod ssets;

pub use augment::{
    aug_from_lax, enumerate_augmentations, enumerate_lin2, enumerate_normal_lax_from_order,
    lax_from_aug, validate_augmentation, Augmentation, Lin2Aug, OrderLax,
};
pub use setale::{
    grothendieck_construction, is_principal_setale, CSheaf, DiagramOfSpaces, SEtaleBundle,
    SEtaleCategory,
};
pub use ssets::{is_nerve_of_linear_order, is_principal_ssets};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{CategoryJson, FinCategory};
use crate::finspace::{EtaleJson, EtaleSpace, FinSpace, SpaceJson};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrincipalError {
    #[error("U_{0} ⊄ U_{1} although {0} ≤ {1}")]
    MonotonicityViolation(String, String),
    #[error("{0}")]
    Malformed(String),
}

/// A `ℂ`-bundle over `X`: a functor from a finite category into étale
/// spaces over `X`, with functoriality checked exhaustively.
#[derive(Debug, Clone)]
pub struct CBundle {
    pub category: FinCategory,
    pub base: FinSpace,
    sheaves: Vec<EtaleSpace>,
    /// Per arrow of the category: a sheaf map on total spaces.
    arrow_maps: Vec<Vec<usize>>,
}

impl CBundle {
    pub fn validate(
        category: FinCategory,
        base: FinSpace,
        sheaves: Vec<EtaleSpace>,
        arrow_maps: Vec<Vec<usize>>,
    ) -> Result<Self, PrincipalError> {
        if sheaves.len() != category.object_count() || arrow_maps.len() != category.arrow_count() {
            return Err(PrincipalError::Malformed("one sheaf per object, one map per arrow".into()));
        }
        for s in &sheaves {
            if s.base() != &base {
                return Err(PrincipalError::Malformed("sheaf not over the bundle base".into()));
            }
        }
        for a in 0..category.arrow_count() {
            crate::finspace::validate_sheaf_map(
                &sheaves[category.src(a)],
                &sheaves[category.tgt(a)],
                arrow_maps[a].clone(),
            )
            .map_err(|e| {
                PrincipalError::Malformed(format!("E({}) is not a sheaf map: {e}", category.arrow(a).id))
            })?;
        }
        for o in 0..category.object_count() {
            let id = category.identity_of(o);
            if arrow_maps[id].iter().enumerate().any(|(p, &q)| p != q) {
                return Err(PrincipalError::Malformed(format!(
                    "E(id_{}) is not the identity",
                    category.object_id(o)
                )));
            }
        }
        for g in 0..category.arrow_count() {
            for f in 0..category.arrow_count() {
                if category.tgt(f) != category.src(g) {
                    continue;
                }
                let gf = category.comp(g, f);
                for p in 0..sheaves[category.src(f)].total().len() {
                    if arrow_maps[gf][p] != arrow_maps[g][arrow_maps[f][p]] {
                        return Err(PrincipalError::Malformed(format!(
                            "E({}) ∘ E({}) ≠ E({})",
                            category.arrow(g).id,
                            category.arrow(f).id,
                            category.arrow(gf).id
                        )));
                    }
                }
            }
        }
        Ok(CBundle { category, base, sheaves, arrow_maps })
    }

    pub fn sheaf(&self, object: usize) -> &EtaleSpace {
        &self.sheaves[object]
    }

    pub fn apply(&self, arrow: usize, point: usize) -> usize {
        self.arrow_maps[arrow][point]
    }
}

/// A failed filtering condition with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PrincipalFailure {
    /// No object has a nonempty stalk at the point.
    Emptiness { point: String },
    /// The pair (y ∈ E(c)_x, z ∈ E(d)_x) admits no common ancestor.
    Transitivity { point: String, c: String, y: String, d: String, z: String },
    /// The parallel pair (α, β) equalized by y admits no equalizing arrow.
    Freeness { point: String, alpha: String, beta: String, y: String },
}

#[derive(Debug, Clone)]
pub struct PrincipalReport {
    pub principal: bool,
    pub failures: Vec<PrincipalFailure>,
}

/// Evaluates non-emptiness, transitivity and freeness at one stalk.
pub fn is_principal_at(b: &CBundle, x: usize) -> PrincipalReport {
    let mut failures = Vec::new();
    let cat = &b.category;
    let point = b.base.point_id(x).to_string();
    let stalks: Vec<Vec<usize>> =
        (0..cat.object_count()).map(|c| b.sheaf(c).stalk(x)).collect();
    // (i) non-emptiness.
    if stalks.iter().all(|s| s.is_empty()) {
        failures.push(PrincipalFailure::Emptiness { point: point.clone() });
    }
    // (ii) transitivity: any two points admit a common ancestor.
    'outer: for c in 0..cat.object_count() {
        for &y in &stalks[c] {
            for d in 0..cat.object_count() {
                for &z in &stalks[d] {
                    let mut found = false;
                    'search: for bb in 0..cat.object_count() {
                        for alpha in cat.hom(bb, c) {
                            for beta in cat.hom(bb, d) {
                                for &w in &stalks[bb] {
                                    if b.apply(alpha, w) == y && b.apply(beta, w) == z {
                                        found = true;
                                        break 'search;
                                    }
                                }
                            }
                        }
                    }
                    if !found {
                        failures.push(PrincipalFailure::Transitivity {
                            point: point.clone(),
                            c: cat.object_id(c).to_string(),
                            y: b.sheaf(c).total().point_id(y).to_string(),
                            d: cat.object_id(d).to_string(),
                            z: b.sheaf(d).total().point_id(z).to_string(),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    // (iii) freeness: equalized parallel pairs are equalized by an arrow.
    'free: for c in 0..cat.object_count() {
        for d in 0..cat.object_count() {
            for alpha in cat.hom(c, d) {
                for beta in cat.hom(c, d) {
                    for &y in &stalks[c] {
                        if b.apply(alpha, y) != b.apply(beta, y) {
                            continue;
                        }
                        let mut found = false;
                        'search2: for bb in 0..cat.object_count() {
                            for gamma in cat.hom(bb, c) {
                                if cat.comp(alpha, gamma) != cat.comp(beta, gamma) {
                                    continue;
                                }
                                for &z in &stalks[bb] {
                                    if b.apply(gamma, z) == y {
                                        found = true;
                                        break 'search2;
                                    }
                                }
                            }
                        }
                        if !found {
                            failures.push(PrincipalFailure::Freeness {
                                point: point.clone(),
                                alpha: cat.arrow(alpha).id.clone(),
                                beta: cat.arrow(beta).id.clone(),
                                y: b.sheaf(c).total().point_id(y).to_string(),
                            });
                            break 'free;
                        }
                    }
                }
            }
        }
    }
    PrincipalReport { principal: failures.is_empty(), failures }
}

/// Conjunction of the stalkwise conditions over every point of the base.
pub fn is_principal_bundle(b: &CBundle) -> PrincipalReport {
    let mut failures = Vec::new();
    for x in 0..b.base.len() {
        failures.extend(is_principal_at(b, x).failures);
    }
    PrincipalReport { principal: failures.is_empty(), failures }
}

/// Direct torsor check for a bundle under a one-object groupoid: every
/// stalk is nonempty and the group acts freely and transitively on it.
/// Independent oracle for the group case of the filtering conditions.
pub fn group_bundle_is_torsor(b: &CBundle) -> bool {
    assert_eq!(b.category.object_count(), 1, "group bundles have one object");
    let arrows: Vec<usize> = (0..b.category.arrow_count()).collect();
    for x in 0..b.base.len() {
        let stalk = b.sheaf(0).stalk(x);
        if stalk.is_empty() {
            return false;
        }
        // Free: g·y = y forces g = id.
        for &g in &arrows {
            for &y in &stalk {
                if b.apply(g, y) == y && !b.category.is_identity_arrow(g) {
                    return false;
                }
            }
        }
        // Transitive: some g moves y to z.
        for &y in &stalk {
            for &z in &stalk {
                if !arrows.iter().any(|&g| b.apply(g, y) == z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether the monotone family covers the space and every double
/// intersection `U_i ∩ U_j` is covered by `{U_k : k ≤ i, k ≤ j}`.
/// Monotonicity (`i ≤ j ⇒ U_i ⊆ U_j`) is a precondition.
pub fn is_locally_directed_cover(
    base: &FinSpace,
    index: &FinSpace,
    opens: &[BTreeSet<usize>],
) -> Result<bool, PrincipalError> {
    assert_eq!(opens.len(), index.len());
    for i in 0..index.len() {
        for j in 0..index.len() {
            if index.leq(i, j) && !opens[i].is_subset(&opens[j]) {
                return Err(PrincipalError::MonotonicityViolation(
                    index.point_id(i).to_string(),
                    index.point_id(j).to_string(),
                ));
            }
        }
    }
    for i in 0..index.len() {
        for j in 0..index.len() {
            for &x in opens[i].intersection(&opens[j]) {
                let covered = (0..index.len())
                    .any(|k| index.leq(k, i) && index.leq(k, j) && opens[k].contains(&x));
                if !covered {
                    return Ok(false);
                }
            }
        }
    }
    let _ = base;
    Ok(true)
}

/// Whether the family covers the space.
pub fn covers(base: &FinSpace, opens: &[BTreeSet<usize>]) -> bool {
    (0..base.len()).all(|x| opens.iter().any(|u| u.contains(&x)))
}

/// The bundle of opens of a monotone poset-indexed family: `E(i)` is the
/// open `U_i` as an étale space over `X`, arrows act by inclusion.
pub fn bundle_from_poset_cover(
    base: &FinSpace,
    index: &FinSpace,
    opens: &[BTreeSet<usize>],
) -> Result<CBundle, PrincipalError> {
    for i in 0..index.len() {
        for j in 0..index.len() {
            if index.leq(i, j) && !opens[i].is_subset(&opens[j]) {
                return Err(PrincipalError::MonotonicityViolation(
                    index.point_id(i).to_string(),
                    index.point_id(j).to_string(),
                ));
            }
        }
    }
    let cat = FinCategory::from_poset(index);
    let sheaves: Vec<EtaleSpace> = opens
        .iter()
        .map(|u| EtaleSpace::open_inclusion(base, u))
        .collect::<Result<_, _>>()
        .map_err(|e| PrincipalError::Malformed(e.to_string()))?;
    let mut arrow_maps = Vec::new();
    for a in 0..cat.arrow_count() {
        let (i, j) = (cat.src(a), cat.tgt(a));
        // U_i ⊆ U_j: each point of U_i maps to itself inside U_j.
        let map: Vec<usize> = sheaves[i]
            .total()
            .points()
            .iter()
            .map(|p| sheaves[j].total().index_of(p).expect("inclusion of opens"))
            .collect();
        arrow_maps.push(map);
    }
    CBundle::validate(cat, base.clone(), sheaves, arrow_maps)
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

/// JSON form of a bundle:
/// `{"category":…, "space":…, "E":{obj: etale}, "E_arrows":{arrow: {pt: pt}}}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub category: CategoryJson,
    pub space: SpaceJson,
    #[serde(rename = "E")]
    pub sheaves: BTreeMap<String, EtaleJson>,
    #[serde(rename = "E_arrows")]
    pub arrows: BTreeMap<String, BTreeMap<String, String>>,
}

impl BundleJson {
    pub fn to_bundle(&self) -> Result<CBundle, PrincipalError> {
        let category = self
            .category
            .to_category()
            .map_err(|e| PrincipalError::Malformed(e.to_string()))?;
        let base = self
            .space
            .to_space()
            .map_err(|e| PrincipalError::Malformed(e.to_string()))?;
        let mut sheaves = Vec::new();
        for o in 0..category.object_count() {
            let json = self.sheaves.get(category.object_id(o)).ok_or_else(|| {
                PrincipalError::Malformed(format!("no sheaf for `{}`", category.object_id(o)))
            })?;
            sheaves
                .push(json.to_etale().map_err(|e| PrincipalError::Malformed(e.to_string()))?);
        }
        let mut arrow_maps = Vec::new();
        for a in 0..category.arrow_count() {
            let tbl = self.arrows.get(&category.arrow(a).id).ok_or_else(|| {
                PrincipalError::Malformed(format!("no map for `{}`", category.arrow(a).id))
            })?;
            let src = &sheaves[category.src(a)];
            let tgt = &sheaves[category.tgt(a)];
            let mut map = vec![0usize; src.total().len()];
            for (p, pid) in src.total().points().iter().enumerate() {
                let img = tbl.get(pid).ok_or_else(|| {
                    PrincipalError::Malformed(format!("no image for point `{pid}`"))
                })?;
                map[p] = tgt
                    .total()
                    .index_of(img)
                    .map_err(|e| PrincipalError::Malformed(e.to_string()))?;
            }
            arrow_maps.push(map);
        }
        CBundle::validate(category, base, sheaves, arrow_maps)
    }

    pub fn from_bundle(b: &CBundle) -> Self {
        let sheaves = (0..b.category.object_count())
            .map(|o| {
                (b.category.object_id(o).to_string(), EtaleJson::from_etale(b.sheaf(o)))
            })
            .collect();
        let arrows = (0..b.category.arrow_count())
            .map(|a| {
                let src = b.sheaf(b.category.src(a));
                let tgt = b.sheaf(b.category.tgt(a));
                let tbl: BTreeMap<String, String> = (0..src.total().len())
                    .map(|p| {
                        (
                            src.total().point_id(p).to_string(),
                            tgt.total().point_id(b.apply(a, p)).to_string(),
                        )
                    })
                    .collect();
                (b.category.arrow(a).id.clone(), tbl)
            })
            .collect();
        BundleJson {
            category: CategoryJson::from_category(&b.category),
            space: SpaceJson::from_space(&b.base),
            sheaves,
            arrows,
        }
    }
}
