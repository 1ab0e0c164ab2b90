//! Truncated simplicial and bisimplicial sets: identities, operators,
//! coskeleta, Segal maps, diagonals, products.

use std::collections::BTreeMap;

use crate::simplicial::SimplicialError;

/// All monotone maps `[n] → [m]`, each as its image vector, in lex order.
pub fn monotone_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n + 1);
    fn rec(cur: &mut Vec<usize>, n: usize, m: usize, lo: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=m {
            cur.push(v);
            rec(cur, n, m, v, out);
            cur.pop();
        }
    }
    rec(&mut cur, n, m, 0, &mut out);
    out
}

/// Image vector of the coface `δ_i: [n-1] → [n]` (skips `i`).
pub fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..=n).filter(|&v| v != i).collect()
}

/// Image vector of the codegeneracy `σ_i: [n+1] → [n]` (repeats `i`).
pub fn codegeneracy(n: usize, i: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..=n).collect();
    v.insert(i, i);
    v
}

/// A violated simplicial identity together with a witness cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    pub law: String,
    pub level: usize,
    pub i: usize,
    pub j: usize,
    pub cell: String,
}

/// A simplicial set truncated at `maxdim`, with levelwise finite cell sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSSet {
    maxdim: usize,
    levels: Vec<Vec<String>>,
    index: Vec<BTreeMap<String, usize>>,
    /// faces[n][i] for 1 ≤ n ≤ maxdim, 0 ≤ i ≤ n: level n → level n-1.
    faces: Vec<Vec<Vec<usize>>>,
    /// degens[n][i] for 0 ≤ n < maxdim, 0 ≤ i ≤ n: level n → level n+1.
    degens: Vec<Vec<Vec<usize>>>,
}

impl TruncSSet {
    pub fn new(
        maxdim: usize,
        levels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SimplicialError> {
        if levels.len() != maxdim + 1 {
            return Err(SimplicialError::Malformed(format!(
                "expected {} levels, got {}",
                maxdim + 1,
                levels.len()
            )));
        }
        let mut index = Vec::new();
        for (n, cells) in levels.iter().enumerate() {
            let map: BTreeMap<String, usize> =
                cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
            if map.len() != cells.len() {
                return Err(SimplicialError::Malformed(format!("duplicate cell id at level {n}")));
            }
            let mut sorted = cells.clone();
            sorted.sort();
            if sorted != *cells {
                return Err(SimplicialError::Malformed(format!(
                    "cells at level {n} are not canonically sorted"
                )));
            }
            index.push(map);
        }
        if faces.len() != maxdim + 1 || degens.len() != maxdim + 1 {
            return Err(SimplicialError::Malformed("operator table shape mismatch".into()));
        }
        for n in 1..=maxdim {
            if faces[n].len() != n + 1 {
                return Err(SimplicialError::Malformed(format!("level {n} needs {} faces", n + 1)));
            }
            for (i, f) in faces[n].iter().enumerate() {
                if f.len() != levels[n].len() {
                    return Err(SimplicialError::Malformed(format!("face d_{i} at {n} wrong size")));
                }
                if let Some(&bad) = f.iter().find(|&&v| v >= levels[n - 1].len()) {
                    return Err(SimplicialError::Malformed(format!(
                        "face d_{i} at {n} hits out-of-range cell {bad}"
                    )));
                }
            }
        }
        for n in 0..maxdim {
            if degens[n].len() != n + 1 {
                return Err(SimplicialError::Malformed(format!(
                    "level {n} needs {} degeneracies",
                    n + 1
                )));
            }
            for (i, s) in degens[n].iter().enumerate() {
                if s.len() != levels[n].len() {
                    return Err(SimplicialError::Malformed(format!(
                        "degeneracy s_{i} at {n} wrong size"
                    )));
                }
                if let Some(&bad) = s.iter().find(|&&v| v >= levels[n + 1].len()) {
                    return Err(SimplicialError::Malformed(format!(
                        "degeneracy s_{i} at {n} hits out-of-range cell {bad}"
                    )));
                }
            }
        }
        Ok(TruncSSet { maxdim, levels, index, faces, degens })
    }

    /// Builds levels/operators from closures; cells are sorted first.
    pub fn build<F, G>(
        maxdim: usize,
        mut levels: Vec<Vec<String>>,
        face_of: F,
        degen_of: G,
    ) -> Result<Self, SimplicialError>
    where
        F: Fn(usize, usize, &str) -> String,
        G: Fn(usize, usize, &str) -> String,
    {
        for cells in &mut levels {
            cells.sort();
            cells.dedup();
        }
        let index: Vec<BTreeMap<String, usize>> = levels
            .iter()
            .map(|cells| cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        let mut faces = vec![Vec::new(); maxdim + 1];
        let mut degens = vec![Vec::new(); maxdim + 1];
        for n in 1..=maxdim {
            for i in 0..=n {
                let mut col = Vec::with_capacity(levels[n].len());
                for c in &levels[n] {
                    let img = face_of(n, i, c);
                    let &k = index[n - 1].get(&img).ok_or_else(|| {
                        SimplicialError::Malformed(format!(
                            "face d_{i}({c}) = {img} missing at level {}",
                            n - 1
                        ))
                    })?;
                    col.push(k);
                }
                faces[n].push(col);
            }
        }
        for n in 0..maxdim {
            for i in 0..=n {
                let mut col = Vec::with_capacity(levels[n].len());
                for c in &levels[n] {
                    let img = degen_of(n, i, c);
                    let &k = index[n + 1].get(&img).ok_or_else(|| {
                        SimplicialError::Malformed(format!(
                            "degeneracy s_{i}({c}) = {img} missing at level {}",
                            n + 1
                        ))
                    })?;
                    col.push(k);
                }
                degens[n].push(col);
            }
        }
        TruncSSet::new(maxdim, levels, faces, degens)
    }

    pub fn maxdim(&self) -> usize {
        self.maxdim
    }

    pub fn level(&self, n: usize) -> &[String] {
        &self.levels[n]
    }

    pub fn cell_count(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn cell_id(&self, n: usize, c: usize) -> &str {
        &self.levels[n][c]
    }

    pub fn cell_index(&self, n: usize, id: &str) -> Option<usize> {
        self.index[n].get(id).copied()
    }

    pub fn face(&self, n: usize, i: usize, c: usize) -> usize {
        self.faces[n][i][c]
    }

    pub fn degen(&self, n: usize, i: usize, c: usize) -> usize {
        self.degens[n][i][c]
    }

    /// The operator `Y(α): Y_n → Y_m` for a monotone `α: [m] → [n]` given
    /// by its image vector, as a cell map.
    pub fn op(&self, alpha: &[usize], n: usize) -> Result<Vec<usize>, SimplicialError> {
        let m = alpha.len() - 1;
        if n > self.maxdim || m > self.maxdim {
            return Err(SimplicialError::TruncationTooShallow {
                needed: n.max(m),
                have: self.maxdim,
            });
        }
        if alpha.windows(2).any(|w| w[0] > w[1]) || alpha.iter().any(|&v| v > n) {
            return Err(SimplicialError::Malformed(format!("not a monotone map into [{n}]")));
        }
        // Peel a coface if α misses a value, a codegeneracy if it repeats one.
        if let Some(missing) = (0..=n).find(|v| !alpha.contains(v)) {
            // α = δ_missing ∘ α′ with α′ into [n-1].
            let alpha2: Vec<usize> =
                alpha.iter().map(|&v| if v > missing { v - 1 } else { v }).collect();
            let inner = self.op(&alpha2, n - 1)?;
            let d = &self.faces[n][missing];
            return Ok((0..self.cell_count(n)).map(|c| inner[d[c]]).collect());
        }
        if let Some(j) = (0..m).find(|&j| alpha[j] == alpha[j + 1]) {
            // α = α″ ∘ σ_j with α″: [m-1] → [n].
            let mut alpha2 = alpha.to_vec();
            alpha2.remove(j);
            let inner = self.op(&alpha2, n)?;
            let s = &self.degens[m - 1][j];
            return Ok(inner.iter().map(|&c| s[c]).collect());
        }
        // α is bijective and monotone, hence the identity.
        Ok((0..self.cell_count(n)).collect())
    }

    /// Whether cell `c` of level `n` is degenerate.
    pub fn is_degenerate(&self, n: usize, c: usize) -> bool {
        if n == 0 {
            return false;
        }
        (0..n).any(|i| self.degens[n - 1][i][self.faces[n][i][c]] == c)
    }

    /// Checks every simplicial identity in range, reporting violations with
    /// witnesses. Empty report ⇔ valid.
    pub fn check_identities(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        let mut report = |law: &str, level: usize, i: usize, j: usize, cell: usize| {
            out.push(IdentityViolation {
                law: law.to_string(),
                level,
                i,
                j,
                cell: self.levels[level][cell].clone(),
            });
        };
        // d_i d_j = d_{j-1} d_i for i < j.
        for n in 2..=self.maxdim {
            for j in 1..=n {
                for i in 0..j {
                    for c in 0..self.cell_count(n) {
                        let lhs = self.face(n - 1, i, self.face(n, j, c));
                        let rhs = self.face(n - 1, j - 1, self.face(n, i, c));
                        if lhs != rhs {
                            report("d_i d_j = d_{j-1} d_i", n, i, j, c);
                        }
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i <= j.
        for n in 0..self.maxdim.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    for c in 0..self.cell_count(n) {
                        let lhs = self.degen(n + 1, j + 1, self.degen(n, i, c));
                        let rhs = self.degen(n + 1, i, self.degen(n, j, c));
                        if lhs != rhs {
                            report("s_{j+1} s_i = s_i s_j", n, i, j, c);
                        }
                    }
                }
            }
        }
        // d_i s_j: the three cases.
        for n in 1..=self.maxdim.saturating_sub(1) {
            for j in 0..=(n - 1) {
                for i in 0..=n {
                    for c in 0..self.cell_count(n - 1) {
                        let lhs = self.face(n, i, self.degen(n - 1, j, c));
                        let rhs = if i < j {
                            self.degen(n - 2, j - 1, self.face(n - 1, i, c))
                        } else if i == j || i == j + 1 {
                            c
                        } else {
                            self.degen(n - 2, j, self.face(n - 1, i - 1, c))
                        };
                        if lhs != rhs {
                            report("d_i s_j", n - 1, i, j, c);
                        }
                    }
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Coskeleta
// ---------------------------------------------------------------------------

/// One level of a coskeleton together with the unit map from the original.
#[derive(Debug, Clone)]
pub struct CoskLevel {
    pub cell_ids: Vec<String>,
    pub unit: Vec<usize>,
}

impl CoskLevel {
    pub fn size(&self) -> usize {
        self.cell_ids.len()
    }

    pub fn unit_injective(&self) -> bool {
        let mut seen: Vec<usize> = self.unit.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn unit_image_size(&self) -> usize {
        let mut seen: Vec<usize> = self.unit.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn unit_bijective(&self) -> bool {
        self.unit_injective() && self.unit.len() == self.cell_ids.len()
    }
}

/// Enumerates matching tuples `(x_0,…,x_arity-1)` with
/// `face(x_j, i) = face(x_i, j-1)` for `i < j`.
pub fn matching_tuples(
    arity: usize,
    cells: usize,
    face: &dyn Fn(usize, usize) -> usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut tuple: Vec<usize> = Vec::with_capacity(arity);
    fn rec(
        arity: usize,
        cells: usize,
        face: &dyn Fn(usize, usize) -> usize,
        tuple: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if tuple.len() == arity {
            out.push(tuple.clone());
            return;
        }
        let j = tuple.len();
        'cand: for x in 0..cells {
            for i in 0..j {
                if face(x, i) != face(tuple[i], j - 1) {
                    continue 'cand;
                }
            }
            tuple.push(x);
            rec(arity, cells, face, tuple, out);
            tuple.pop();
        }
    }
    rec(arity, cells, face, &mut tuple, &mut out);
    out
}

struct CoskTower {
    /// tower[m - k - 1] holds the tuples making up `Cosk_k(Y)_m` for m > k,
    /// as indices into the previous tower level (or into Y_k for m = k+1).
    tuples: Vec<Vec<Vec<usize>>>,
    /// unit maps c_m: Y_m → tower level m, for k < m.
    units: Vec<Vec<usize>>,
}

fn cosk_tower(y: &TruncSSet, k: usize, upto: usize) -> Result<CoskTower, SimplicialError> {
    if upto > y.maxdim() {
        return Err(SimplicialError::TruncationTooShallow { needed: upto, have: y.maxdim() });
    }
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut units: Vec<Vec<usize>> = Vec::new();
    for m in (k + 1)..=upto {
        let prev_count =
            if m == k + 1 { y.cell_count(k) } else { tuples[m - k - 2].len() };
        let prev_face: Box<dyn Fn(usize, usize) -> usize> = if m == k + 1 {
            if k == 0 {
                // Y_0 cells have no faces; matching conditions are vacuous.
                Box::new(|_, _| 0)
            } else {
                Box::new(move |c, i| y.face(k, i, c))
            }
        } else {
            let prev = tuples[m - k - 2].clone();
            Box::new(move |c, i| prev[c][i])
        };
        let level_tuples = matching_tuples(m + 1, prev_count, prev_face.as_ref());
        let index: BTreeMap<Vec<usize>, usize> =
            level_tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        // Unit map.
        let mut unit = Vec::with_capacity(y.cell_count(m));
        for c in 0..y.cell_count(m) {
            let tuple: Vec<usize> = (0..=m)
                .map(|i| {
                    let f = y.face(m, i, c);
                    if m == k + 1 {
                        f
                    } else {
                        units[m - k - 2][f]
                    }
                })
                .collect();
            let &t = index.get(&tuple).ok_or_else(|| {
                SimplicialError::Malformed(format!(
                    "boundary of cell {} at level {m} is not a matching tuple",
                    y.cell_id(m, c)
                ))
            })?;
            unit.push(t);
        }
        tuples.push(level_tuples);
        units.push(unit);
    }
    let _ = k;
    Ok(CoskTower { tuples, units })
}

/// Computes `Cosk_k(Y)_n` as matching boundary tuples up the tower, plus
/// the unit map `c_n: Y_n → Cosk_k(Y)_n`.
pub fn coskeleton_level(y: &TruncSSet, k: usize, n: usize) -> Result<CoskLevel, SimplicialError> {
    if k >= n {
        return Err(SimplicialError::Malformed(format!("coskeleton level needs k < n, got k={k} n={n}")));
    }
    if n > y.maxdim() {
        return Err(SimplicialError::TruncationTooShallow { needed: n, have: y.maxdim() });
    }
    let tower = cosk_tower(y, k, n)?;
    let m = n - k - 1;
    let cell_ids: Vec<String> = tower.tuples[m]
        .iter()
        .map(|t| {
            let parts: Vec<String> = t
                .iter()
                .map(|&p| {
                    if m == 0 {
                        y.cell_id(k, p).to_string()
                    } else {
                        format!("#{p}")
                    }
                })
                .collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    Ok(CoskLevel { cell_ids, unit: tower.units[m].clone() })
}

#[derive(Debug, Clone)]
pub struct CoskeletalReport {
    pub coskeletal: bool,
    /// Levels where the unit fails to be bijective, with a witness.
    pub failures: Vec<(usize, String)>,
}

/// Whether `c_n` is bijective for all `k < n ≤ maxdim`. Requires
/// `maxdim ≥ k + 2` so the answer is informative.
pub fn is_k_coskeletal(y: &TruncSSet, k: usize) -> Result<CoskeletalReport, SimplicialError> {
    if y.maxdim() < k + 2 {
        return Err(SimplicialError::TruncationTooShallow { needed: k + 2, have: y.maxdim() });
    }
    let tower = cosk_tower(y, k, y.maxdim())?;
    let mut failures = Vec::new();
    for n in (k + 1)..=y.maxdim() {
        let unit = &tower.units[n - k - 1];
        let total = tower.tuples[n - k - 1].len();
        let mut seen = vec![false; total];
        let mut witness: Option<String> = None;
        for (c, &t) in unit.iter().enumerate() {
            if seen[t] {
                witness = Some(format!("unit not injective at cell {}", y.cell_id(n, c)));
                break;
            }
            seen[t] = true;
        }
        if witness.is_none() && unit.len() != total {
            witness = Some(format!(
                "unit not surjective at level {n}: {} cells vs {} matching tuples",
                unit.len(),
                total
            ));
        }
        if let Some(w) = witness {
            failures.push((n, w));
        }
    }
    Ok(CoskeletalReport { coskeletal: failures.is_empty(), failures })
}

// ---------------------------------------------------------------------------
// Segal maps
// ---------------------------------------------------------------------------

/// The Segal map at level `n`: `Y_n → Y_1 ×_{Y_0} … ×_{Y_0} Y_1`.
#[derive(Debug, Clone)]
pub struct SegalMap {
    pub n: usize,
    /// Spine tuples `(e_1,…,e_n)` with `d_0 e_i = d_1 e_{i+1}`.
    pub target: Vec<Vec<usize>>,
    pub map: Vec<usize>,
}

impl SegalMap {
    pub fn injective(&self) -> bool {
        let mut seen: Vec<usize> = self.map.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn surjective(&self) -> bool {
        let mut seen: Vec<usize> = self.map.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.target.len()
    }

    pub fn bijective(&self) -> bool {
        self.injective() && self.surjective()
    }
}

pub fn segal_map(y: &TruncSSet, n: usize) -> Result<SegalMap, SimplicialError> {
    if n < 2 {
        return Err(SimplicialError::Malformed("Segal maps start at level 2".into()));
    }
    if n > y.maxdim() {
        return Err(SimplicialError::TruncationTooShallow { needed: n, have: y.maxdim() });
    }
    let mut target = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let edges = y.cell_count(1);
    let mut tuple = Vec::with_capacity(n);
    fn rec(
        y: &TruncSSet,
        n: usize,
        edges: usize,
        tuple: &mut Vec<usize>,
        target: &mut Vec<Vec<usize>>,
        index: &mut BTreeMap<Vec<usize>, usize>,
    ) {
        if tuple.len() == n {
            index.insert(tuple.clone(), target.len());
            target.push(tuple.clone());
            return;
        }
        for e in 0..edges {
            if let Some(&prev) = tuple.last() {
                if y.face(1, 0, prev) != y.face(1, 1, e) {
                    continue;
                }
            }
            tuple.push(e);
            rec(y, n, edges, tuple, target, index);
            tuple.pop();
        }
    }
    rec(y, n, edges, &mut tuple, &mut target, &mut index);
    let mut spine_ops = Vec::new();
    for i in 1..=n {
        spine_ops.push(y.op(&[i - 1, i], n)?);
    }
    let mut map = Vec::with_capacity(y.cell_count(n));
    for c in 0..y.cell_count(n) {
        let tuple: Vec<usize> = spine_ops.iter().map(|op| op[c]).collect();
        let &t = index
            .get(&tuple)
            .ok_or_else(|| SimplicialError::Malformed("spine of a cell does not match".into()))?;
        map.push(t);
    }
    Ok(SegalMap { n, target, map })
}

// ---------------------------------------------------------------------------
// Bisimplicial sets
// ---------------------------------------------------------------------------

/// A bisimplicial set truncated at `(hdim, vdim)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncBiSSet {
    hdim: usize,
    vdim: usize,
    levels: Vec<Vec<Vec<String>>>,
    index: Vec<Vec<BTreeMap<String, usize>>>,
    /// h_faces[n][m][i]: (n,m) → (n-1,m) for n ≥ 1.
    h_faces: Vec<Vec<Vec<Vec<usize>>>>,
    h_degens: Vec<Vec<Vec<Vec<usize>>>>,
    /// v_faces[n][m][i]: (n,m) → (n,m-1) for m ≥ 1.
    v_faces: Vec<Vec<Vec<Vec<usize>>>>,
    v_degens: Vec<Vec<Vec<Vec<usize>>>>,
}

impl TruncBiSSet {
    /// Builds from closures; cells sorted canonically per level.
    pub fn build<F, G, H, K>(
        hdim: usize,
        vdim: usize,
        mut levels: Vec<Vec<Vec<String>>>,
        h_face: F,
        h_degen: G,
        v_face: H,
        v_degen: K,
    ) -> Result<Self, SimplicialError>
    where
        F: Fn(usize, usize, usize, &str) -> String,
        G: Fn(usize, usize, usize, &str) -> String,
        H: Fn(usize, usize, usize, &str) -> String,
        K: Fn(usize, usize, usize, &str) -> String,
    {
        for row in &mut levels {
            for cells in row.iter_mut() {
                cells.sort();
                cells.dedup();
            }
        }
        let index: Vec<Vec<BTreeMap<String, usize>>> = levels
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cells| {
                        cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()
                    })
                    .collect()
            })
            .collect();
        let lookup = |n: usize, m: usize, id: &str| -> Result<usize, SimplicialError> {
            index[n][m].get(id).copied().ok_or_else(|| {
                SimplicialError::Malformed(format!("cell `{id}` missing at level ({n},{m})"))
            })
        };
        let mut h_faces = vec![vec![Vec::new(); vdim + 1]; hdim + 1];
        let mut h_degens = vec![vec![Vec::new(); vdim + 1]; hdim + 1];
        let mut v_faces = vec![vec![Vec::new(); vdim + 1]; hdim + 1];
        let mut v_degens = vec![vec![Vec::new(); vdim + 1]; hdim + 1];
        for n in 0..=hdim {
            for m in 0..=vdim {
                if n >= 1 {
                    for i in 0..=n {
                        let mut col = Vec::new();
                        for c in &levels[n][m] {
                            col.push(lookup(n - 1, m, &h_face(n, m, i, c))?);
                        }
                        h_faces[n][m].push(col);
                    }
                }
                if n < hdim {
                    for i in 0..=n {
                        let mut col = Vec::new();
                        for c in &levels[n][m] {
                            col.push(lookup(n + 1, m, &h_degen(n, m, i, c))?);
                        }
                        h_degens[n][m].push(col);
                    }
                }
                if m >= 1 {
                    for i in 0..=m {
                        let mut col = Vec::new();
                        for c in &levels[n][m] {
                            col.push(lookup(n, m - 1, &v_face(n, m, i, c))?);
                        }
                        v_faces[n][m].push(col);
                    }
                }
                if m < vdim {
                    for i in 0..=m {
                        let mut col = Vec::new();
                        for c in &levels[n][m] {
                            col.push(lookup(n, m + 1, &v_degen(n, m, i, c))?);
                        }
                        v_degens[n][m].push(col);
                    }
                }
            }
        }
        Ok(TruncBiSSet { hdim, vdim, levels, index, h_faces, h_degens, v_faces, v_degens })
    }

    pub fn hdim(&self) -> usize {
        self.hdim
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    pub fn level(&self, n: usize, m: usize) -> &[String] {
        &self.levels[n][m]
    }

    pub fn cell_count(&self, n: usize, m: usize) -> usize {
        self.levels[n][m].len()
    }

    pub fn h_face(&self, n: usize, m: usize, i: usize, c: usize) -> usize {
        self.h_faces[n][m][i][c]
    }

    pub fn v_face(&self, n: usize, m: usize, i: usize, c: usize) -> usize {
        self.v_faces[n][m][i][c]
    }

    pub fn h_degen(&self, n: usize, m: usize, i: usize, c: usize) -> usize {
        self.h_degens[n][m][i][c]
    }

    pub fn v_degen(&self, n: usize, m: usize, i: usize, c: usize) -> usize {
        self.v_degens[n][m][i][c]
    }

    /// Fixes one axis index and returns the other axis as a `TruncSSet`.
    pub fn row(&self, n: usize) -> Result<TruncSSet, SimplicialError> {
        let levels: Vec<Vec<String>> = (0..=self.vdim).map(|m| self.levels[n][m].clone()).collect();
        let faces: Vec<Vec<Vec<usize>>> = (0..=self.vdim)
            .map(|m| if m == 0 { Vec::new() } else { self.v_faces[n][m].clone() })
            .collect();
        let degens: Vec<Vec<Vec<usize>>> =
            (0..=self.vdim).map(|m| self.v_degens[n][m].clone()).collect();
        TruncSSet::new(self.vdim, levels, faces, degens)
    }

    /// Checks both axes' simplicial identities plus commutation of the two
    /// actions. Violations are described as strings.
    pub fn check_identities(&self) -> Vec<String> {
        let mut out = Vec::new();
        // Axis identities via the row/column simplicial sets.
        for n in 0..=self.hdim {
            if let Ok(row) = self.row(n) {
                for v in row.check_identities() {
                    out.push(format!("row {n}: {} at level {} cell {}", v.law, v.level, v.cell));
                }
            }
        }
        for m in 0..=self.vdim {
            let col = self.column(m);
            match col {
                Ok(col) => {
                    for v in col.check_identities() {
                        out.push(format!(
                            "column {m}: {} at level {} cell {}",
                            v.law, v.level, v.cell
                        ));
                    }
                }
                Err(e) => out.push(format!("column {m}: {e}")),
            }
        }
        // Commutation of horizontal and vertical operators.
        for n in 0..=self.hdim {
            for m in 0..=self.vdim {
                for c in 0..self.cell_count(n, m) {
                    if n >= 1 && m >= 1 {
                        for i in 0..=n {
                            for j in 0..=m {
                                let a = self.v_face(n - 1, m, j, self.h_face(n, m, i, c));
                                let b = self.h_face(n, m - 1, i, self.v_face(n, m, j, c));
                                if a != b {
                                    out.push(format!(
                                        "d^h_{i} d^v_{j} != d^v_{j} d^h_{i} at ({n},{m}) cell {}",
                                        self.levels[n][m][c]
                                    ));
                                }
                            }
                        }
                    }
                    if n >= 1 && m < self.vdim {
                        for i in 0..=n {
                            for j in 0..=m {
                                let a = self.v_degen(n - 1, m, j, self.h_face(n, m, i, c));
                                let b = self.h_face(n, m + 1, i, self.v_degen(n, m, j, c));
                                if a != b {
                                    out.push(format!(
                                        "s^v_{j} d^h_{i} != d^h_{i} s^v_{j} at ({n},{m}) cell {}",
                                        self.levels[n][m][c]
                                    ));
                                }
                            }
                        }
                    }
                    if n < self.hdim && m >= 1 {
                        for i in 0..=n {
                            for j in 0..=m {
                                let a = self.v_face(n + 1, m, j, self.h_degen(n, m, i, c));
                                let b = self.h_degen(n, m - 1, i, self.v_face(n, m, j, c));
                                if a != b {
                                    out.push(format!(
                                        "d^v_{j} s^h_{i} != s^h_{i} d^v_{j} at ({n},{m}) cell {}",
                                        self.levels[n][m][c]
                                    ));
                                }
                            }
                        }
                    }
                    if n < self.hdim && m < self.vdim {
                        for i in 0..=n {
                            for j in 0..=m {
                                let a = self.v_degen(n + 1, m, j, self.h_degen(n, m, i, c));
                                let b = self.h_degen(n, m + 1, i, self.v_degen(n, m, j, c));
                                if a != b {
                                    out.push(format!(
                                        "s^v_{j} s^h_{i} != s^h_{i} s^v_{j} at ({n},{m}) cell {}",
                                        self.levels[n][m][c]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, m: usize) -> Result<TruncSSet, SimplicialError> {
        let levels: Vec<Vec<String>> = (0..=self.hdim).map(|n| self.levels[n][m].clone()).collect();
        let faces: Vec<Vec<Vec<usize>>> = (0..=self.hdim)
            .map(|n| if n == 0 { Vec::new() } else { self.h_faces[n][m].clone() })
            .collect();
        let degens: Vec<Vec<Vec<usize>>> =
            (0..=self.hdim).map(|n| self.h_degens[n][m].clone()).collect();
        TruncSSet::new(self.hdim, levels, faces, degens)
    }

    /// Swaps the two axes.
    pub fn transpose(&self) -> Self {
        let mut levels = vec![vec![Vec::new(); self.hdim + 1]; self.vdim + 1];
        let mut index = vec![vec![BTreeMap::new(); self.hdim + 1]; self.vdim + 1];
        let mut h_faces = vec![vec![Vec::new(); self.hdim + 1]; self.vdim + 1];
        let mut h_degens = vec![vec![Vec::new(); self.hdim + 1]; self.vdim + 1];
        let mut v_faces = vec![vec![Vec::new(); self.hdim + 1]; self.vdim + 1];
        let mut v_degens = vec![vec![Vec::new(); self.hdim + 1]; self.vdim + 1];
        for n in 0..=self.hdim {
            for m in 0..=self.vdim {
                levels[m][n] = self.levels[n][m].clone();
                index[m][n] = self.index[n][m].clone();
                h_faces[m][n] = self.v_faces[n][m].clone();
                h_degens[m][n] = self.v_degens[n][m].clone();
                v_faces[m][n] = self.h_faces[n][m].clone();
                v_degens[m][n] = self.h_degens[n][m].clone();
            }
        }
        TruncBiSSet {
            hdim: self.vdim,
            vdim: self.hdim,
            levels,
            index,
            h_faces,
            h_degens,
            v_faces,
            v_degens,
        }
    }
}

/// The diagonal of a bisimplicial set: level `n` is `Y_{n,n}`, operators are
/// the equal-index horizontal/vertical composites.
pub fn diagonal(y: &TruncBiSSet) -> Result<TruncSSet, SimplicialError> {
    let d = y.hdim().min(y.vdim());
    let levels: Vec<Vec<String>> = (0..=d).map(|n| y.level(n, n).to_vec()).collect();
    let mut faces = vec![Vec::new(); d + 1];
    let mut degens = vec![Vec::new(); d + 1];
    for n in 1..=d {
        for i in 0..=n {
            let col: Vec<usize> = (0..y.cell_count(n, n))
                .map(|c| y.v_face(n - 1, n, i, y.h_face(n, n, i, c)))
                .collect();
            faces[n].push(col);
        }
    }
    for n in 0..d {
        for i in 0..=n {
            let col: Vec<usize> = (0..y.cell_count(n, n))
                .map(|c| y.v_degen(n + 1, n, i, y.h_degen(n, n, i, c)))
                .collect();
            degens[n].push(col);
        }
    }
    TruncSSet::new(d, levels, faces, degens)
}

/// Cell id used in binary products.
pub fn product_cell_id(a: &str, b: &str) -> String {
    format!("{a}⊗{b}")
}

fn split_product_id(id: &str) -> (&str, &str) {
    let pos = id.find('⊗').expect("product cell id");
    (&id[..pos], &id[pos + '⊗'.len_utf8()..])
}

/// Levelwise product of two truncated simplicial sets.
pub fn product_sset(a: &TruncSSet, b: &TruncSSet) -> Result<TruncSSet, SimplicialError> {
    let d = a.maxdim().min(b.maxdim());
    let mut levels = Vec::new();
    for n in 0..=d {
        let mut cells = Vec::new();
        for x in a.level(n) {
            for y in b.level(n) {
                cells.push(product_cell_id(x, y));
            }
        }
        levels.push(cells);
    }
    let face = |n: usize, i: usize, c: &str| -> String {
        let (x, y) = split_product_id(c);
        let xi = a.cell_index(n, x).expect("product cell");
        let yi = b.cell_index(n, y).expect("product cell");
        product_cell_id(a.cell_id(n - 1, a.face(n, i, xi)), b.cell_id(n - 1, b.face(n, i, yi)))
    };
    let degen = |n: usize, i: usize, c: &str| -> String {
        let (x, y) = split_product_id(c);
        let xi = a.cell_index(n, x).expect("product cell");
        let yi = b.cell_index(n, y).expect("product cell");
        product_cell_id(a.cell_id(n + 1, a.degen(n, i, xi)), b.cell_id(n + 1, b.degen(n, i, yi)))
    };
    TruncSSet::build(d, levels, face, degen)
}

/// External product of two simplicial sets as a bisimplicial set:
/// `(Y₁ ⊠ Y₂)_{n,m} = Y₁_n × Y₂_m`.
pub fn product_bisset(a: &TruncSSet, b: &TruncSSet) -> Result<TruncBiSSet, SimplicialError> {
    let mut levels = vec![vec![Vec::new(); b.maxdim() + 1]; a.maxdim() + 1];
    for n in 0..=a.maxdim() {
        for m in 0..=b.maxdim() {
            for x in a.level(n) {
                for y in b.level(m) {
                    levels[n][m].push(product_cell_id(x, y));
                }
            }
        }
    }
    let h_face = |n: usize, _m: usize, i: usize, c: &str| -> String {
        let (x, y) = split_product_id(c);
        let xi = a.cell_index(n, x).expect("cell");
        product_cell_id(a.cell_id(n - 1, a.face(n, i, xi)), y)
    };
    let h_degen = |n: usize, _m: usize, i: usize, c: &str| -> String {
        let (x, y) = split_product_id(c);
        let xi = a.cell_index(n, x).expect("cell");
        product_cell_id(a.cell_id(n + 1, a.degen(n, i, xi)), y)
    };
    let v_face = |_n: usize, m: usize, i: usize, c: &str| -> String {
        let (x, y) = split_product_id(c);
        let yi = b.cell_index(m, y).expect("cell");
        product_cell_id(x, b.cell_id(m - 1, b.face(m, i, yi)))
    };
    let v_degen = |_n: usize, m: usize, i: usize, c: &str| -> String {
        let (x, y) = split_product_id(c);
        let yi = b.cell_index(m, y).expect("cell");
        product_cell_id(x, b.cell_id(m + 1, b.degen(m, i, yi)))
    };
    TruncBiSSet::build(a.maxdim(), b.maxdim(), levels, h_face, h_degen, v_face, v_degen)
}

/// The constant simplicial set on a single cell per level.
pub fn constant_singleton(maxdim: usize) -> TruncSSet {
    let levels: Vec<Vec<String>> = (0..=maxdim).map(|_| vec!["*".to_string()]).collect();
    TruncSSet::build(maxdim, levels, |_, _, _| "*".into(), |_, _, _| "*".into())
        .expect("constant singleton is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicategory::duskin_nerve;
    use crate::category::nerve_simplicial;
    use crate::fixtures;

    #[test]
    fn zero_truncated_is_vacuously_valid() {
        let y = TruncSSet::build(
            0,
            vec![vec!["a".into(), "b".into()]],
            |_, _, _| unreachable!(),
            |_, _, _| unreachable!(),
        )
        .unwrap();
        assert!(y.check_identities().is_empty());
    }

    #[test]
    fn corrupted_face_is_reported_with_witness() {
        let n = nerve_simplicial(&fixtures::z2_category(), 3).unwrap();
        // Swap one entry of d_0 at level 2.
        let mut faces: Vec<Vec<Vec<usize>>> = (0..=3)
            .map(|k| {
                if k == 0 {
                    Vec::new()
                } else {
                    (0..=k).map(|i| (0..n.cell_count(k)).map(|c| n.face(k, i, c)).collect()).collect()
                }
            })
            .collect();
        faces[2][0][0] = (faces[2][0][0] + 1) % n.cell_count(1);
        let degens: Vec<Vec<Vec<usize>>> = (0..=3)
            .map(|k| {
                if k == 3 {
                    Vec::new()
                } else {
                    (0..=k).map(|i| (0..n.cell_count(k)).map(|c| n.degen(k, i, c)).collect()).collect()
                }
            })
            .collect();
        let levels: Vec<Vec<String>> = (0..=3).map(|k| n.level(k).to_vec()).collect();
        let bad = TruncSSet::new(3, levels, faces, degens).unwrap();
        let report = bad.check_identities();
        assert!(!report.is_empty());
        // The violation names a concrete law and witness cell.
        assert!(report.iter().any(|v| !v.cell.is_empty()));
    }

    #[test]
    fn category_nerves_are_two_coskeletal() {
        for (_, c) in fixtures::category_fixtures() {
            let n = nerve_simplicial(&c, 4).unwrap();
            let report = is_k_coskeletal(&n, 2).unwrap();
            assert!(report.coskeletal, "{:?}", report.failures);
        }
    }

    #[test]
    fn parallel_arrows_break_one_coskeletality() {
        let n = nerve_simplicial(&fixtures::parallel_pair_category(), 3).unwrap();
        let report = is_k_coskeletal(&n, 1).unwrap();
        assert!(!report.coskeletal);
    }

    #[test]
    fn constant_singleton_is_zero_coskeletal() {
        let y = constant_singleton(3);
        assert!(is_k_coskeletal(&y, 0).unwrap().coskeletal);
    }

    #[test]
    fn coskeleton_too_shallow_is_an_error() {
        let y = constant_singleton(2);
        assert!(matches!(
            is_k_coskeletal(&y, 2),
            Err(SimplicialError::TruncationTooShallow { .. })
        ));
        assert!(matches!(
            coskeleton_level(&y, 1, 3),
            Err(SimplicialError::TruncationTooShallow { .. })
        ));
    }

    #[test]
    fn duskin_sigma2_z2_cosk2_level_three() {
        let b = fixtures::sigma2_cyclic(2);
        let n = duskin_nerve(&b, 3).unwrap();
        let cosk = coskeleton_level(&n, 2, 3).unwrap();
        assert_eq!(cosk.size(), 16);
        assert_eq!(cosk.unit_image_size(), 8);
        assert!(cosk.unit_injective());
        assert!(!cosk.unit_bijective());
    }

    #[test]
    fn singleton_boundary_fill_is_bijective() {
        // Terminal nerve: level n a singleton over a singleton boundary.
        let y = constant_singleton(3);
        let cosk = coskeleton_level(&y, 2, 3).unwrap();
        assert!(cosk.unit_bijective());
    }

    #[test]
    fn segal_bijective_for_category_nerves() {
        for (_, c) in fixtures::category_fixtures() {
            let n = nerve_simplicial(&c, 4).unwrap();
            for k in 2..=4 {
                assert!(segal_map(&n, k).unwrap().bijective());
            }
        }
    }

    #[test]
    fn segal_two_to_one_for_duskin_sigma2_z2() {
        let b = fixtures::sigma2_cyclic(2);
        let n = duskin_nerve(&b, 3).unwrap();
        let s = segal_map(&n, 2).unwrap();
        assert_eq!(s.target.len(), 1);
        assert_eq!(n.cell_count(2), 2);
        assert!(s.surjective());
        assert!(!s.injective());
    }

    #[test]
    fn segal_singleton_target() {
        let y = constant_singleton(2);
        let s = segal_map(&y, 2).unwrap();
        assert_eq!(s.target.len(), 1);
        assert!(s.bijective());
    }

    #[test]
    fn diagonal_of_constant_singleton() {
        let a = constant_singleton(3);
        let bi = product_bisset(&a, &a).unwrap();
        let d = diagonal(&bi).unwrap();
        assert_eq!(d.level_sizes(), vec![1, 1, 1, 1]);
        assert!(d.check_identities().is_empty());
    }

    #[test]
    fn diagonal_of_product_of_nerves_is_nerve_of_product() {
        // On ℤ/2 × [1], levelwise bijection commuting with the operators.
        let nz2 = nerve_simplicial(&fixtures::z2_category(), 3).unwrap();
        let narrow = nerve_simplicial(&fixtures::arrow_category(), 3).unwrap();
        let d = diagonal(&product_bisset(&nz2, &narrow).unwrap()).unwrap();
        let p = product_sset(&nz2, &narrow).unwrap();
        assert_eq!(d, p);
        assert!(d.check_identities().is_empty());
        // The product category's nerve has the same level counts.
        let prod_cat = product_category(&fixtures::z2_category(), &fixtures::arrow_category());
        let np = nerve_simplicial(&prod_cat, 3).unwrap();
        assert_eq!(d.level_sizes(), np.level_sizes());
    }

    fn product_category(
        a: &crate::category::FinCategory,
        b: &crate::category::FinCategory,
    ) -> crate::category::FinCategory {
        let objects: Vec<String> = a
            .objects()
            .iter()
            .flat_map(|x| b.objects().iter().map(move |y| format!("{x}*{y}")))
            .collect();
        let mut arrows = Vec::new();
        for i in 0..a.arrow_count() {
            for j in 0..b.arrow_count() {
                arrows.push((
                    format!("{}*{}", a.arrow(i).id, b.arrow(j).id),
                    format!("{}*{}", a.object_id(a.src(i)), b.object_id(b.src(j))),
                    format!("{}*{}", a.object_id(a.tgt(i)), b.object_id(b.tgt(j))),
                ));
            }
        }
        let mut compose = Vec::new();
        for i in 0..a.arrow_count() {
            for i2 in 0..a.arrow_count() {
                if a.tgt(i2) != a.src(i) {
                    continue;
                }
                for j in 0..b.arrow_count() {
                    for j2 in 0..b.arrow_count() {
                        if b.tgt(j2) != b.src(j) {
                            continue;
                        }
                        compose.push((
                            format!("{}*{}", a.arrow(i).id, b.arrow(j).id),
                            format!("{}*{}", a.arrow(i2).id, b.arrow(j2).id),
                            format!(
                                "{}*{}",
                                a.arrow(a.comp(i, i2)).id,
                                b.arrow(b.comp(j, j2)).id
                            ),
                        ));
                    }
                }
            }
        }
        let id = (0..a.object_count())
            .flat_map(|x| {
                (0..b.object_count()).map(move |y| {
                    (
                        format!("{}*{}", a.object_id(x), b.object_id(y)),
                        format!(
                            "{}*{}",
                            a.arrow(a.identity_of(x)).id,
                            b.arrow(b.identity_of(y)).id
                        ),
                    )
                })
            })
            .collect();
        crate::category::FinCategory::validate(objects, arrows, compose, id).unwrap()
    }

    #[test]
    fn diagonal_commutes_with_transpose() {
        let nz2 = nerve_simplicial(&fixtures::z2_category(), 3).unwrap();
        let narrow = nerve_simplicial(&fixtures::arrow_category(), 3).unwrap();
        let bi = product_bisset(&nz2, &narrow).unwrap();
        let lhs = diagonal(&bi).unwrap();
        let rhs = diagonal(&bi.transpose()).unwrap();
        assert_eq!(lhs.level_sizes(), rhs.level_sizes());
        // The swap renames cells a⊗b ↦ b⊗a; counts and identities agree.
        assert!(rhs.check_identities().is_empty());
    }

    #[test]
    fn bisimplicial_identities_hold_for_products() {
        let nz2 = nerve_simplicial(&fixtures::z2_category(), 2).unwrap();
        let narrow = nerve_simplicial(&fixtures::arrow_category(), 2).unwrap();
        let bi = product_bisset(&nz2, &narrow).unwrap();
        assert!(bi.check_identities().is_empty());
    }
}
