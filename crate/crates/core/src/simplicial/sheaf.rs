//! Simplicial objects in finite spaces and sheaves on them: a system of
//! étale spaces `S^n` over the levels with structure maps
//! `S(α): Y(α)*S^n → S^m` subject to normalization and the composition
//! square.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::finspace::{
    composite_id, pullback_etale, ContinuousMap, EtaleJson, EtaleSpace, FinSpace, Pullback,
    SpaceJson,
};
use crate::simplicial::{monotone_maps, SimplicialError};

/// A truncated simplicial object in finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceSSet {
    maxdim: usize,
    levels: Vec<FinSpace>,
    /// faces[n][i]: point map level n → level n-1.
    faces: Vec<Vec<Vec<usize>>>,
    degens: Vec<Vec<Vec<usize>>>,
}

impl SpaceSSet {
    pub fn new(
        maxdim: usize,
        levels: Vec<FinSpace>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SimplicialError> {
        if levels.len() != maxdim + 1 {
            return Err(SimplicialError::Malformed("level count".into()));
        }
        let check_map = |from: &FinSpace, to: &FinSpace, map: &Vec<usize>| {
            ContinuousMap::validate(from.clone(), to.clone(), map.clone())
                .map(|_| ())
                .map_err(|e| SimplicialError::Malformed(e.to_string()))
        };
        for n in 1..=maxdim {
            if faces[n].len() != n + 1 {
                return Err(SimplicialError::Malformed(format!("face count at level {n}")));
            }
            for m in &faces[n] {
                check_map(&levels[n], &levels[n - 1], m)?;
            }
        }
        for n in 0..maxdim {
            if degens[n].len() != n + 1 {
                return Err(SimplicialError::Malformed(format!("degeneracy count at level {n}")));
            }
            for m in &degens[n] {
                check_map(&levels[n], &levels[n + 1], m)?;
            }
        }
        let s = SpaceSSet { maxdim, levels, faces, degens };
        let violations = s.check_identities();
        if let Some(v) = violations.first() {
            return Err(SimplicialError::Malformed(v.clone()));
        }
        Ok(s)
    }

    /// The constant simplicial space on `x`.
    pub fn constant(maxdim: usize, x: &FinSpace) -> Self {
        let id: Vec<usize> = (0..x.len()).collect();
        let levels = vec![x.clone(); maxdim + 1];
        let mut faces = vec![Vec::new(); maxdim + 1];
        let mut degens = vec![Vec::new(); maxdim + 1];
        for n in 1..=maxdim {
            faces[n] = vec![id.clone(); n + 1];
        }
        for n in 0..maxdim {
            degens[n] = vec![id.clone(); n + 1];
        }
        SpaceSSet { maxdim, levels, faces, degens }
    }

    pub fn maxdim(&self) -> usize {
        self.maxdim
    }

    pub fn level(&self, n: usize) -> &FinSpace {
        &self.levels[n]
    }

    fn check_identities(&self) -> Vec<String> {
        let mut out = Vec::new();
        let face = |n: usize, i: usize, p: usize| self.faces[n][i][p];
        let degen = |n: usize, i: usize, p: usize| self.degens[n][i][p];
        for n in 2..=self.maxdim {
            for j in 1..=n {
                for i in 0..j {
                    for p in 0..self.levels[n].len() {
                        if face(n - 1, i, face(n, j, p)) != face(n - 1, j - 1, face(n, i, p)) {
                            out.push(format!("d_{i} d_{j} fails at level {n} point {p}"));
                        }
                    }
                }
            }
        }
        for n in 0..self.maxdim.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    for p in 0..self.levels[n].len() {
                        if degen(n + 1, j + 1, degen(n, i, p)) != degen(n + 1, i, degen(n, j, p)) {
                            out.push(format!("s s fails at level {n} point {p}"));
                        }
                    }
                }
            }
        }
        for n in 1..self.maxdim {
            for j in 0..n {
                for i in 0..=n {
                    for p in 0..self.levels[n - 1].len() {
                        let lhs = face(n, i, degen(n - 1, j, p));
                        let rhs = if i < j {
                            degen(n - 2, j - 1, face(n - 1, i, p))
                        } else if i == j || i == j + 1 {
                            p
                        } else {
                            degen(n - 2, j, face(n - 1, i - 1, p))
                        };
                        if lhs != rhs {
                            out.push(format!("d_{i} s_{j} fails at level {} point {p}", n - 1));
                        }
                    }
                }
            }
        }
        out
    }

    /// The point map `Y(α): Y_n → Y_m` for monotone `α: [m] → [n]`.
    pub fn op(&self, alpha: &[usize], n: usize) -> Result<Vec<usize>, SimplicialError> {
        let m = alpha.len() - 1;
        if n > self.maxdim || m > self.maxdim {
            return Err(SimplicialError::TruncationTooShallow {
                needed: n.max(m),
                have: self.maxdim,
            });
        }
        if let Some(missing) = (0..=n).find(|v| !alpha.contains(v)) {
            let alpha2: Vec<usize> =
                alpha.iter().map(|&v| if v > missing { v - 1 } else { v }).collect();
            let inner = self.op(&alpha2, n - 1)?;
            let d = &self.faces[n][missing];
            return Ok((0..self.levels[n].len()).map(|p| inner[d[p]]).collect());
        }
        if let Some(j) = (0..m).find(|&j| alpha[j] == alpha[j + 1]) {
            let mut alpha2 = alpha.to_vec();
            alpha2.remove(j);
            let inner = self.op(&alpha2, n)?;
            let s = &self.degens[m - 1][j];
            return Ok(inner.iter().map(|&p| s[p]).collect());
        }
        Ok((0..self.levels[n].len()).collect())
    }

    /// `Y(α)` as a continuous map, for pullbacks.
    pub fn op_map(&self, alpha: &[usize], n: usize) -> Result<ContinuousMap, SimplicialError> {
        let m = alpha.len() - 1;
        let map = self.op(alpha, n)?;
        ContinuousMap::validate(self.levels[m].clone(), self.levels[n].clone(), map)
            .map_err(|e| SimplicialError::Malformed(e.to_string()))
    }
}

/// Key of a structure map: a monotone `α: [from] → [to]` by image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonotoneKey {
    pub from: usize,
    pub to: usize,
    pub image: Vec<usize>,
}

impl MonotoneKey {
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        format!("[{}]→[{}]:({})", self.from, self.to, parts.join(","))
    }
}

/// A sheaf on a simplicial space: étale spaces `S^n` over the levels plus a
/// structure map for every monotone `α` in truncation range.
#[derive(Debug, Clone)]
pub struct SheafOnSSpace {
    pub base: SpaceSSet,
    pub sheaves: Vec<EtaleSpace>,
    /// For `α: [n] → [m]`, the assignment from points of the pullback
    /// `Y(α)*S^n` (in the canonical pullback order) to points of `S^m`.
    pub maps: BTreeMap<MonotoneKey, Vec<usize>>,
}

impl SheafOnSSpace {
    /// The canonical pullback of `S^n` along `Y(α)`.
    pub fn pullback_along(&self, key: &MonotoneKey) -> Result<Pullback, SimplicialError> {
        let f = self.base.op_map(&key.image, key.to)?;
        pullback_etale(&self.sheaves[key.from], &f)
            .map_err(|e| SimplicialError::Malformed(e.to_string()))
    }
}

/// Checks Def-style validity: every structure map present and a sheaf map,
/// normalization `S(id) = id`, and the composition square for every
/// composable pair. Returns a report of violations; empty ⇔ valid.
pub fn validate_sheaf_on_sspace(s: &SheafOnSSpace) -> Vec<String> {
    let mut out = Vec::new();
    let maxdim = s.base.maxdim();
    if s.sheaves.len() != maxdim + 1 {
        out.push("one étale space per level is required".into());
        return out;
    }
    for (n, sh) in s.sheaves.iter().enumerate() {
        if sh.base() != s.base.level(n) {
            out.push(format!("sheaf at level {n} does not live over the level"));
            return out;
        }
    }
    // Cache pullbacks with point-pair indices.
    let mut pullbacks: BTreeMap<MonotoneKey, (Pullback, HashMap<(usize, usize), usize>)> =
        BTreeMap::new();
    for n in 0..=maxdim {
        for m in 0..=maxdim {
            for image in monotone_maps(n, m) {
                let key = MonotoneKey { from: n, to: m, image };
                let pb = match s.pullback_along(&key) {
                    Ok(pb) => pb,
                    Err(e) => {
                        out.push(format!("pullback along {} failed: {e}", key.describe()));
                        return out;
                    }
                };
                let index: HashMap<(usize, usize), usize> =
                    pb.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                pullbacks.insert(key, (pb, index));
            }
        }
    }
    // Presence and sheaf-map property.
    for (key, (pb, _)) in &pullbacks {
        let Some(map) = s.maps.get(key) else {
            out.push(format!("missing structure map for {}", key.describe()));
            continue;
        };
        if map.len() != pb.space.total().len() {
            out.push(format!("structure map for {} has the wrong size", key.describe()));
            continue;
        }
        match crate::finspace::validate_sheaf_map(&pb.space, &s.sheaves[key.to], map.clone()) {
            Ok(_) => {}
            Err(e) => out.push(format!("structure map for {} is not a sheaf map: {e}", key.describe())),
        }
    }
    if !out.is_empty() {
        return out;
    }
    // (i) normalization: S(id_[n]) is the canonical projection (y, e) ↦ e.
    for n in 0..=maxdim {
        let key = MonotoneKey { from: n, to: n, image: (0..=n).collect() };
        let (pb, _) = &pullbacks[&key];
        let map = &s.maps[&key];
        for (i, &(_, e)) in pb.pairs.iter().enumerate() {
            if map[i] != e {
                out.push(format!(
                    "normalization fails at level {n}: S(id)({}) ≠ {}",
                    pb.space.total().point_id(i),
                    s.sheaves[n].total().point_id(e)
                ));
            }
        }
    }
    // (ii) the composition square for every composable pair α: [n]→[m],
    // β: [m]→[k].
    for n in 0..=maxdim {
        for m in 0..=maxdim {
            for alpha in monotone_maps(n, m) {
                for k in 0..=maxdim {
                    for beta in monotone_maps(m, k) {
                        let beta_alpha: Vec<usize> =
                            alpha.iter().map(|&v| beta[v]).collect();
                        let key_a = MonotoneKey { from: n, to: m, image: alpha.clone() };
                        let key_b = MonotoneKey { from: m, to: k, image: beta.clone() };
                        let key_ba = MonotoneKey { from: n, to: k, image: beta_alpha };
                        let (_, idx_a) = &pullbacks[&key_a];
                        let (_, idx_b) = &pullbacks[&key_b];
                        let (pb_ba, _) = &pullbacks[&key_ba];
                        let map_a = &s.maps[&key_a];
                        let map_b = &s.maps[&key_b];
                        let map_ba = &s.maps[&key_ba];
                        // Y(β): Y_k → Y_m.
                        let op_beta = s.base.op(&beta, k).expect("operator in range");
                        let mut ok = true;
                        for (i, &(z, e)) in pb_ba.pairs.iter().enumerate() {
                            // Through the square: pull e back over Y_m at
                            // the point Y(β)(z), apply S(α), then S(β).
                            let w = op_beta[z];
                            let lhs = map_ba[i];
                            let mid = map_a[idx_a[&(w, e)]];
                            let rhs = map_b[idx_b[&(z, mid)]];
                            if lhs != rhs {
                                ok = false;
                                break;
                            }
                        }
                        if !ok {
                            out.push(format!(
                                "composition square fails for α = {}, β = {}",
                                key_a.describe(),
                                key_b.describe()
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

/// The constant sheaf with the given finite fibre over every level, with
/// the canonical structure maps.
pub fn constant_sheaf_system(
    base: &SpaceSSet,
    fibre: &[String],
) -> Result<SheafOnSSpace, SimplicialError> {
    let sheaves: Vec<EtaleSpace> = (0..=base.maxdim())
        .map(|n| EtaleSpace::constant(base.level(n), fibre))
        .collect::<Result<_, _>>()
        .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
    let mut system = SheafOnSSpace { base: base.clone(), sheaves, maps: BTreeMap::new() };
    let mut maps = BTreeMap::new();
    for n in 0..=base.maxdim() {
        for m in 0..=base.maxdim() {
            for image in monotone_maps(n, m) {
                let key = MonotoneKey { from: n, to: m, image };
                let pb = system.pullback_along(&key)?;
                // (y, (f, x)) ↦ (f, y): same sheet over the new point.
                let tgt = &system.sheaves[key.to];
                let map: Vec<usize> = pb
                    .pairs
                    .iter()
                    .map(|&(y, e)| {
                        // Constant-sheaf points are `fibre|basepoint`.
                        let sheet = system.sheaves[key.from]
                            .total()
                            .point_id(e)
                            .split_once(crate::finspace::ID_SEP)
                            .expect("constant-sheaf point id")
                            .0
                            .to_string();
                        let id = composite_id([sheet.as_str(), tgt.base().point_id(y)]);
                        tgt.total().index_of(&id).expect("constant sheaf point")
                    })
                    .collect();
                maps.insert(key, map);
            }
        }
    }
    system.maps = maps;
    Ok(system)
}

/// A sheaf pulled back along all operators from a fixed sheaf on the
/// (constant) base: `S^n = S` with the canonical structure maps.
pub fn pulled_back_system(
    x: &FinSpace,
    sheaf: &EtaleSpace,
    maxdim: usize,
) -> Result<SheafOnSSpace, SimplicialError> {
    if sheaf.base() != x {
        return Err(SimplicialError::Malformed("sheaf does not live over the space".into()));
    }
    let base = SpaceSSet::constant(maxdim, x);
    let sheaves = vec![sheaf.clone(); maxdim + 1];
    let mut system = SheafOnSSpace { base, sheaves, maps: BTreeMap::new() };
    let mut maps = BTreeMap::new();
    for n in 0..=maxdim {
        for m in 0..=maxdim {
            for image in monotone_maps(n, m) {
                let key = MonotoneKey { from: n, to: m, image };
                let pb = system.pullback_along(&key)?;
                // All operators are the identity on the base, so the
                // structure map is (y, e) ↦ e.
                let map: Vec<usize> = pb.pairs.iter().map(|&(_, e)| e).collect();
                maps.insert(key, map);
            }
        }
    }
    system.maps = maps;
    Ok(system)
}

// ---------------------------------------------------------------------------
// JSON formats
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSSetJson {
    pub maxdim: usize,
    pub levels: Vec<SpaceJson>,
    /// [level, i, point map]
    pub d: Vec<(usize, usize, BTreeMap<String, String>)>,
    pub s: Vec<(usize, usize, BTreeMap<String, String>)>,
}

impl SpaceSSetJson {
    pub fn to_space_sset(&self) -> Result<SpaceSSet, SimplicialError> {
        let levels: Vec<FinSpace> = self
            .levels
            .iter()
            .map(|j| j.to_space())
            .collect::<Result<_, _>>()
            .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
        if levels.len() != self.maxdim + 1 {
            return Err(SimplicialError::Malformed("level count".into()));
        }
        let resolve = |from: &FinSpace,
                       to: &FinSpace,
                       tbl: &BTreeMap<String, String>|
         -> Result<Vec<usize>, SimplicialError> {
            let mut v = vec![0usize; from.len()];
            for (i, p) in from.points().iter().enumerate() {
                let img = tbl.get(p).ok_or_else(|| {
                    SimplicialError::Malformed(format!("no image for point `{p}`"))
                })?;
                v[i] = to
                    .index_of(img)
                    .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
            }
            Ok(v)
        };
        let mut faces = vec![Vec::new(); self.maxdim + 1];
        for n in 1..=self.maxdim {
            faces[n] = vec![Vec::new(); n + 1];
        }
        for (n, i, tbl) in &self.d {
            if *n == 0 || *n > self.maxdim || *i > *n {
                return Err(SimplicialError::Malformed("face index out of range".into()));
            }
            faces[*n][*i] = resolve(&levels[*n], &levels[*n - 1], tbl)?;
        }
        let mut degens = vec![Vec::new(); self.maxdim + 1];
        for n in 0..self.maxdim {
            degens[n] = vec![Vec::new(); n + 1];
        }
        for (n, i, tbl) in &self.s {
            if *n >= self.maxdim || *i > *n {
                return Err(SimplicialError::Malformed("degeneracy index out of range".into()));
            }
            degens[*n][*i] = resolve(&levels[*n], &levels[*n + 1], tbl)?;
        }
        SpaceSSet::new(self.maxdim, levels, faces, degens)
    }

    pub fn from_space_sset(s: &SpaceSSet) -> Self {
        let to_tbl = |from: &FinSpace, to: &FinSpace, map: &Vec<usize>| {
            from.points()
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), to.point_id(map[i]).to_string()))
                .collect::<BTreeMap<_, _>>()
        };
        let mut d = Vec::new();
        for n in 1..=s.maxdim() {
            for i in 0..=n {
                d.push((n, i, to_tbl(s.level(n), s.level(n - 1), &s.faces[n][i])));
            }
        }
        let mut sd = Vec::new();
        for n in 0..s.maxdim() {
            for i in 0..=n {
                sd.push((n, i, to_tbl(s.level(n), s.level(n + 1), &s.degens[n][i])));
            }
        }
        SpaceSSetJson {
            maxdim: s.maxdim(),
            levels: (0..=s.maxdim()).map(|n| SpaceJson::from_space(s.level(n))).collect(),
            d,
            s: sd,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureMapJson {
    pub from: usize,
    pub to: usize,
    pub alpha: Vec<usize>,
    /// Keyed by composite pullback point ids `y|e`.
    pub assignment: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafSystemJson {
    pub base: SpaceSSetJson,
    pub sheaves: Vec<EtaleJson>,
    pub maps: Vec<StructureMapJson>,
}

impl SheafSystemJson {
    pub fn to_system(&self) -> Result<SheafOnSSpace, SimplicialError> {
        let base = self.base.to_space_sset()?;
        let sheaves: Vec<EtaleSpace> = self
            .sheaves
            .iter()
            .map(|j| j.to_etale())
            .collect::<Result<_, _>>()
            .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
        let mut system = SheafOnSSpace { base, sheaves, maps: BTreeMap::new() };
        let mut maps = BTreeMap::new();
        for m in &self.maps {
            let key = MonotoneKey { from: m.from, to: m.to, image: m.alpha.clone() };
            let pb = system.pullback_along(&key)?;
            let mut v = vec![0usize; pb.space.total().len()];
            for (i, _) in pb.pairs.iter().enumerate() {
                let pid = pb.space.total().point_id(i);
                let img = m.assignment.get(pid).ok_or_else(|| {
                    SimplicialError::Malformed(format!(
                        "structure map {}: no image for `{pid}`",
                        key.describe()
                    ))
                })?;
                v[i] = system.sheaves[m.to]
                    .total()
                    .index_of(img)
                    .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
            }
            maps.insert(key, v);
        }
        system.maps = maps;
        Ok(system)
    }

    pub fn from_system(s: &SheafOnSSpace) -> Result<Self, SimplicialError> {
        let mut maps = Vec::new();
        for (key, map) in &s.maps {
            let pb = s.pullback_along(key)?;
            let assignment: BTreeMap<String, String> = (0..map.len())
                .map(|i| {
                    (
                        pb.space.total().point_id(i).to_string(),
                        s.sheaves[key.to].total().point_id(map[i]).to_string(),
                    )
                })
                .collect();
            maps.push(StructureMapJson {
                from: key.from,
                to: key.to,
                alpha: key.image.clone(),
                assignment,
            });
        }
        Ok(SheafSystemJson {
            base: SpaceSSetJson::from_space_sset(&s.base),
            sheaves: s.sheaves.iter().map(EtaleJson::from_etale).collect(),
            maps,
        })
    }
}
