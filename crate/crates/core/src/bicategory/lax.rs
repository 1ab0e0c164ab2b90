//! Normal lax functors from ordinals, icons, and the Duskin nerve.

use std::collections::BTreeMap;

use super::FinBicategory;
use crate::simplicial::{coface, codegeneracy, SimplicialError, TruncSSet};

/// Pairs `(i,j)` with `i ≤ j ≤ n`, lexicographic.
pub fn pairs_le(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            v.push((i, j));
        }
    }
    v
}

/// Pairs `(i,j)` with `i < j ≤ n`, lexicographic.
pub fn pairs_lt(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=n {
        for j in (i + 1)..=n {
            v.push((i, j));
        }
    }
    v
}

/// Triples `(i,j,k)` with `i ≤ j ≤ k ≤ n`, lexicographic.
pub fn triples_le(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            for k in j..=n {
                v.push((i, j, k));
            }
        }
    }
    v
}

pub fn pair_le_index(n: usize, i: usize, j: usize) -> usize {
    let mut idx = 0;
    for a in 0..i {
        idx += n + 1 - a;
    }
    idx + (j - i)
}

pub fn pair_lt_index(n: usize, i: usize, j: usize) -> usize {
    let mut idx = 0;
    for a in 0..i {
        idx += n - a;
    }
    idx + (j - i - 1)
}

pub fn triple_le_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    let mut idx = 0;
    for a in 0..i {
        let m = n + 1 - a;
        idx += m * (m + 1) / 2;
    }
    idx + pair_le_index(n - i, j - i, k - i)
}

/// A normal lax functor `[n] → B`: objects `B_i`, 1-cells `f_ij: B_j → B_i`
/// for `i ≤ j`, comparison 2-cells `β_ijk: f_ij ∘ f_jk ⇒ f_ik` for
/// `i ≤ j ≤ k`, normalized (`f_ii` the identity, degenerate β's the
/// unitors) and satisfying the tetrahedron coherence equation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalLax {
    pub n: usize,
    pub objects: Vec<usize>,
    /// Indexed by `pairs_le(n)`.
    pub one: Vec<usize>,
    /// Indexed by `triples_le(n)`.
    pub two: Vec<usize>,
}

impl NormalLax {
    pub fn f(&self, i: usize, j: usize) -> usize {
        self.one[pair_le_index(self.n, i, j)]
    }

    pub fn beta(&self, i: usize, j: usize, k: usize) -> usize {
        self.two[triple_le_index(self.n, i, j, k)]
    }

    /// Reindexing along a monotone `α: [m] → [n]`; normality is preserved
    /// because degenerate slots land on the normal cells of the original.
    pub fn reindex(&self, alpha: &[usize]) -> NormalLax {
        let m = alpha.len() - 1;
        let objects: Vec<usize> = alpha.iter().map(|&a| self.objects[a]).collect();
        let one: Vec<usize> =
            pairs_le(m).into_iter().map(|(i, j)| self.f(alpha[i], alpha[j])).collect();
        let two: Vec<usize> = triples_le(m)
            .into_iter()
            .map(|(i, j, k)| self.beta(alpha[i], alpha[j], alpha[k]))
            .collect();
        NormalLax { n: m, objects, one, two }
    }

    /// Canonical cell id; strict pairs and triples suffice since the rest
    /// is forced by normality.
    pub fn encode(&self, b: &FinBicategory) -> String {
        if self.n == 0 {
            return b.object_id(self.objects[0]).to_string();
        }
        let objs: Vec<&str> = self.objects.iter().map(|&o| b.object_id(o)).collect();
        let ones: Vec<&str> = pairs_lt(self.n)
            .into_iter()
            .map(|(i, j)| b.one_cell(self.f(i, j)).id.as_str())
            .collect();
        let twos: Vec<&str> = triples_le(self.n)
            .into_iter()
            .filter(|&(i, j, k)| i < j && j < k)
            .map(|(i, j, k)| b.two_cell(self.beta(i, j, k)).id.as_str())
            .collect();
        format!("{};{};{}", objs.join(","), ones.join(","), twos.join(","))
    }

    pub fn is_homomorphism(&self, b: &FinBicategory) -> bool {
        self.two.iter().all(|&beta| b.inv2(beta).is_some())
    }

    /// Full validity check: typing, normalization, and all coherence
    /// instances.
    pub fn check(&self, b: &FinBicategory) -> Result<(), String> {
        let n = self.n;
        if self.objects.len() != n + 1
            || self.one.len() != pairs_le(n).len()
            || self.two.len() != triples_le(n).len()
        {
            return Err("component sizes do not match the ordinal".into());
        }
        for (i, j) in pairs_le(n) {
            let f = self.f(i, j);
            if b.one_cell(f).src != self.objects[j] || b.one_cell(f).tgt != self.objects[i] {
                return Err(format!("f_{i}{j} is not a 1-cell B_{j} → B_{i}"));
            }
        }
        for i in 0..=n {
            if self.f(i, i) != b.id_one(self.objects[i]) {
                return Err(format!("f_{i}{i} is not the identity 1-cell"));
            }
        }
        for (i, j, k) in triples_le(n) {
            let beta = self.beta(i, j, k);
            let src = b.hc1(self.f(i, j), self.f(j, k));
            if b.two_cell(beta).src != src || b.two_cell(beta).tgt != self.f(i, k) {
                return Err(format!("β_{i}{j}{k} is not f_{i}{j}∘f_{j}{k} ⇒ f_{i}{k}"));
            }
            if i == j && self.beta(i, j, k) != b.lunit(self.f(i, k)) {
                return Err(format!("β_{i}{j}{k} is not the lunitor"));
            }
            if j == k && i < j && self.beta(i, j, k) != b.runit(self.f(i, j)) {
                return Err(format!("β_{i}{j}{k} is not the runitor"));
            }
        }
        for (i, j, k, l) in quadruples_le(n) {
            if !coherence_holds(b, self, i, j, k, l) {
                return Err(format!("tetrahedron ({i},{j},{k},{l}) fails"));
            }
        }
        Ok(())
    }
}

fn quadruples_le(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            for k in j..=n {
                for l in k..=n {
                    v.push((i, j, k, l));
                }
            }
        }
    }
    v
}

/// The tetrahedron equation
/// `β_ikl · (β_ijk ∘ f_kl) = β_ijl · (f_ij ∘ β_jkl) · α_{f_ij,f_jk,f_kl}`.
fn coherence_holds(
    b: &FinBicategory,
    nl: &NormalLax,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> bool {
    let lhs = b.vc(nl.beta(i, k, l), b.whisker_r(nl.beta(i, j, k), nl.f(k, l)));
    let rhs = b.vc(
        nl.beta(i, j, l),
        b.vc(
            b.whisker_l(nl.f(i, j), nl.beta(j, k, l)),
            b.alpha(nl.f(i, j), nl.f(j, k), nl.f(k, l)),
        ),
    );
    lhs == rhs
}

/// All normal lax functors `[n] → B`, canonically sorted. Backtracks over
/// objects, then 1-cells by increasing gap, then comparison 2-cells with
/// tetrahedron pruning.
pub fn enumerate_normal_lax(b: &FinBicategory, n: usize) -> Vec<NormalLax> {
    enumerate_lax_inner(b, n, false)
}

/// All normal homomorphisms `[n] → B` (invertible comparison cells).
pub fn enumerate_normal_homs(b: &FinBicategory, n: usize) -> Vec<NormalLax> {
    enumerate_lax_inner(b, n, true)
}

fn enumerate_lax_inner(b: &FinBicategory, n: usize, homs_only: bool) -> Vec<NormalLax> {
    let pairs = pairs_le(n);
    let triples = triples_le(n);
    // Strict pairs ordered by gap so each strict triple is checkable as
    // soon as its widest pair is placed.
    let mut strict_pairs: Vec<(usize, usize)> = pairs_lt(n);
    strict_pairs.sort_by_key(|&(i, j)| (j - i, i));
    let strict_triples: Vec<(usize, usize, usize)> = triples
        .iter()
        .copied()
        .filter(|&(i, j, k)| i < j && j < k)
        .collect();
    // For each strict-triple position, the quadruples to verify once it is
    // assigned: those whose strict constituents all appear at or before it.
    let strict_triple_pos: BTreeMap<(usize, usize, usize), usize> =
        strict_triples.iter().enumerate().map(|(p, &t)| (t, p)).collect();
    let quads = quadruples_le(n);
    let mut quads_ready: Vec<Vec<(usize, usize, usize, usize)>> =
        vec![Vec::new(); strict_triples.len().max(1)];
    let mut quads_upfront: Vec<(usize, usize, usize, usize)> = Vec::new();
    for &(i, j, k, l) in &quads {
        let constituents = [(i, j, k), (i, j, l), (i, k, l), (j, k, l)];
        let ready = constituents
            .iter()
            .filter_map(|t| strict_triple_pos.get(t).copied())
            .max();
        match ready {
            Some(p) => quads_ready[p].push((i, j, k, l)),
            None => quads_upfront.push((i, j, k, l)),
        }
    }

    let mut out = Vec::new();
    let mut objects = vec![0usize; n + 1];
    enumerate_objects(b, n, 0, &mut objects, &mut |objs| {
        let mut one = vec![usize::MAX; pairs.len()];
        for i in 0..=n {
            one[pair_le_index(n, i, i)] = b.id_one(objs[i]);
        }
        let mut state = LaxSearch {
            b,
            n,
            objects: objs,
            one,
            two: vec![usize::MAX; triples.len()],
            strict_pairs: &strict_pairs,
            strict_triples: &strict_triples,
            quads_ready: &quads_ready,
            quads_upfront: &quads_upfront,
            homs_only,
            out: &mut out,
        };
        state.assign_pair(0);
    });
    out.sort();
    out
}

fn enumerate_objects(
    b: &FinBicategory,
    n: usize,
    pos: usize,
    objects: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if pos == n + 1 {
        visit(objects);
        return;
    }
    for o in 0..b.object_count() {
        objects[pos] = o;
        enumerate_objects(b, n, pos + 1, objects, visit);
    }
}

struct LaxSearch<'a> {
    b: &'a FinBicategory,
    n: usize,
    objects: &'a [usize],
    one: Vec<usize>,
    two: Vec<usize>,
    strict_pairs: &'a [(usize, usize)],
    strict_triples: &'a [(usize, usize, usize)],
    quads_ready: &'a [Vec<(usize, usize, usize, usize)>],
    quads_upfront: &'a [(usize, usize, usize, usize)],
    homs_only: bool,
    out: &'a mut Vec<NormalLax>,
}

impl<'a> LaxSearch<'a> {
    fn f(&self, i: usize, j: usize) -> usize {
        self.one[pair_le_index(self.n, i, j)]
    }

    fn assign_pair(&mut self, p: usize) {
        if p == self.strict_pairs.len() {
            self.seed_normal_betas();
            self.assign_triple(0);
            return;
        }
        let (i, j) = self.strict_pairs[p];
        // f_ij: B_j → B_i.
        for cand in self.b.hom_one(self.objects[j], self.objects[i]) {
            self.one[pair_le_index(self.n, i, j)] = cand;
            // Every strict triple (i, m, j) is now fully 1-cell determined;
            // prune if some comparison hom is empty.
            let ok = (i + 1..j).all(|m| {
                let src = self.b.hc1(self.f(i, m), self.f(m, j));
                self.b
                    .hom_two(src, cand)
                    .into_iter()
                    .any(|t| !self.homs_only || self.b.inv2(t).is_some())
            });
            if ok {
                self.assign_pair(p + 1);
            }
        }
        self.one[pair_le_index(self.n, i, j)] = usize::MAX;
    }

    fn seed_normal_betas(&mut self) {
        for (i, j, k) in triples_le(self.n) {
            let idx = triple_le_index(self.n, i, j, k);
            if i == j {
                self.two[idx] = self.b.lunit(self.f(i, k));
            } else if j == k {
                self.two[idx] = self.b.runit(self.f(i, j));
            } else {
                self.two[idx] = usize::MAX;
            }
        }
    }

    fn assign_triple(&mut self, p: usize) {
        if p == 0 {
            let nl = self.current();
            if !self
                .quads_upfront
                .iter()
                .all(|&(i, j, k, l)| coherence_holds(self.b, &nl, i, j, k, l))
            {
                return;
            }
        }
        if p == self.strict_triples.len() {
            self.out.push(self.current());
            return;
        }
        let (i, j, k) = self.strict_triples[p];
        let src = self.b.hc1(self.f(i, j), self.f(j, k));
        let idx = triple_le_index(self.n, i, j, k);
        for cand in self.b.hom_two(src, self.f(i, k)) {
            if self.homs_only && self.b.inv2(cand).is_none() {
                continue;
            }
            self.two[idx] = cand;
            let nl = self.current();
            if self.quads_ready[p]
                .iter()
                .all(|&(a, bb, c, d)| coherence_holds(self.b, &nl, a, bb, c, d))
            {
                self.assign_triple(p + 1);
            }
        }
        self.two[idx] = usize::MAX;
    }

    fn current(&self) -> NormalLax {
        NormalLax {
            n: self.n,
            objects: self.objects.to_vec(),
            one: self.one.clone(),
            two: self.two.clone(),
        }
    }
}

/// The Duskin nerve: level `n` is the set of normal lax functors `[n] → B`,
/// operators act by reindexing.
pub fn duskin_nerve(b: &FinBicategory, maxdim: usize) -> Result<TruncSSet, SimplicialError> {
    assert!(maxdim >= 1);
    let mut by_level: Vec<BTreeMap<String, NormalLax>> = Vec::new();
    let mut levels: Vec<Vec<String>> = Vec::new();
    for n in 0..=maxdim {
        let mut map = BTreeMap::new();
        for nl in enumerate_normal_lax(b, n) {
            map.insert(nl.encode(b), nl);
        }
        levels.push(map.keys().cloned().collect());
        by_level.push(map);
    }
    let face = |n: usize, i: usize, id: &str| -> String {
        by_level[n][id].reindex(&coface(n, i)).encode(b)
    };
    let degen = |n: usize, i: usize, id: &str| -> String {
        by_level[n][id].reindex(&codegeneracy(n, i)).encode(b)
    };
    TruncSSet::build(maxdim, levels, face, degen)
}

// ---------------------------------------------------------------------------
// Icons
// ---------------------------------------------------------------------------

/// The identity icon on a normal homomorphism, as its strict-pair
/// component vector.
pub fn icon_identity(b: &FinBicategory, f: &NormalLax) -> Vec<usize> {
    pairs_lt(f.n).into_iter().map(|(i, j)| b.id_two(f.f(i, j))).collect()
}

/// All icons `F ⇒ G` between normal homomorphisms with the same object
/// assignment, as component vectors over strict pairs (lexicographic).
/// Spine components determine the rest via the invertible β's; every icon
/// identity is then verified.
pub fn enumerate_icons(b: &FinBicategory, f: &NormalLax, g: &NormalLax) -> Vec<Vec<usize>> {
    assert_eq!(f.n, g.n);
    if f.objects != g.objects {
        return Vec::new();
    }
    let n = f.n;
    if n == 0 {
        // A unique (empty) icon: identity of the single object.
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut spine: Vec<usize> = Vec::with_capacity(n);
    enumerate_icon_spines(b, f, g, &mut spine, &mut out);
    out.sort();
    out
}

fn enumerate_icon_spines(
    b: &FinBicategory,
    f: &NormalLax,
    g: &NormalLax,
    spine: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = f.n;
    if spine.len() == n {
        if let Some(phi) = extend_icon(b, f, g, spine) {
            out.push(phi);
        }
        return;
    }
    let i = spine.len();
    for cand in b.hom_two(f.f(i, i + 1), g.f(i, i + 1)) {
        spine.push(cand);
        enumerate_icon_spines(b, f, g, spine, out);
        spine.pop();
    }
}

fn extend_icon(
    b: &FinBicategory,
    f: &NormalLax,
    g: &NormalLax,
    spine: &[usize],
) -> Option<Vec<usize>> {
    let n = f.n;
    let mut phi = vec![usize::MAX; pairs_lt(n).len()];
    for (pos, &(i, j)) in pairs_lt(n).iter().enumerate() {
        if j == i + 1 {
            phi[pos] = spine[i];
        }
    }
    // φ_ik := γ_{i,i+1,k} · (φ_{i,i+1} ∘ φ_{i+1,k}) · β_{i,i+1,k}⁻¹, by gap.
    for gap in 2..=n {
        for i in 0..=(n - gap) {
            let k = i + gap;
            let j = i + 1;
            let inv_beta = b
                .inv2(f.beta(i, j, k))
                .expect("icon enumeration requires invertible comparison cells");
            let paired = b.hc2(phi[pair_lt_index(n, i, j)], phi[pair_lt_index(n, j, k)]);
            let val = b.vc(g.beta(i, j, k), b.vc(paired, inv_beta));
            phi[pair_lt_index(n, i, k)] = val;
        }
    }
    let get = |i: usize, j: usize| -> usize {
        if i == j {
            b.id_two(f.f(i, i))
        } else {
            phi[pair_lt_index(n, i, j)]
        }
    };
    // Verify every instance of the icon identity.
    for (i, j, k) in triples_le(n) {
        let lhs = b.vc(get(i, k), f.beta(i, j, k));
        let rhs = b.vc(g.beta(i, j, k), b.hc2(get(i, j), get(j, k)));
        if lhs != rhs {
            return None;
        }
    }
    Some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn all_fixtures_validate() {
        // Construction already validates; the point is that none panics.
        assert_eq!(fixtures::bicategory_fixtures().len(), 8);
    }

    #[test]
    fn sigma2_z2_lax_counts() {
        let b = fixtures::sigma2_cyclic(2);
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_normal_lax(&b, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 8, 64]);
    }

    #[test]
    fn locally_discrete_lax_count_equals_functor_count() {
        let c = fixtures::z2_category();
        let b = crate::bicategory::FinBicategory::locally_discrete(&c);
        assert_eq!(enumerate_normal_lax(&b, 2).len(), 4);
        // Level 0 is the object set.
        assert_eq!(enumerate_normal_lax(&b, 0).len(), c.object_count());
    }

    #[test]
    fn nonstrict_fixture_lax_counts() {
        // A-component contributes 2^{C(n+1,2)} (1-cell choices times the
        // twisted cocycle solutions), the inert object contributes 1.
        let b = fixtures::nonstrict_two_object();
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_normal_lax(&b, n).len()).collect();
        assert_eq!(counts, vec![2, 3, 9, 65, 1025]);
    }

    #[test]
    fn duskin_nerve_of_terminal_is_singleton_levels() {
        let b = fixtures::terminal_bicategory();
        let n = duskin_nerve(&b, 4).unwrap();
        assert_eq!(n.level_sizes(), vec![1, 1, 1, 1, 1]);
        assert!(n.check_identities().is_empty());
    }

    #[test]
    fn duskin_nerve_passes_simplicial_identities() {
        for (_, b) in fixtures::bicategory_fixtures() {
            let n = duskin_nerve(&b, 3).unwrap();
            assert!(n.check_identities().is_empty());
        }
    }

    #[test]
    fn reindexing_is_functorial_on_lax_functors() {
        // operator(βα) = operator(α) ∘ operator(β) exhaustively at small n.
        let b = fixtures::sigma2_cyclic(2);
        for nl in enumerate_normal_lax(&b, 3) {
            for alpha in crate::simplicial::monotone_maps(2, 3) {
                for beta in crate::simplicial::monotone_maps(1, 2) {
                    let composite: Vec<usize> = beta.iter().map(|&v| alpha[v]).collect();
                    assert_eq!(nl.reindex(&composite), nl.reindex(&alpha).reindex(&beta));
                }
            }
        }
    }

    #[test]
    fn icons_on_interval_into_sigma2_z2() {
        let b = fixtures::sigma2_cyclic(2);
        let homs = enumerate_normal_homs(&b, 1);
        assert_eq!(homs.len(), 1);
        let icons = enumerate_icons(&b, &homs[0], &homs[0]);
        assert_eq!(icons.len(), 2);
    }

    #[test]
    fn icons_between_level_two_homs() {
        let b = fixtures::sigma2_cyclic(2);
        let homs = enumerate_normal_homs(&b, 2);
        assert_eq!(homs.len(), 2);
        for f in &homs {
            for g in &homs {
                // Three unknowns, one linear equation over the group of
                // order two: always four solutions.
                assert_eq!(enumerate_icons(&b, f, g).len(), 4);
            }
        }
    }

    #[test]
    fn identity_icon_always_present() {
        let b = fixtures::nonstrict_two_object();
        for f in enumerate_normal_homs(&b, 2) {
            let icons = enumerate_icons(&b, &f, &f);
            assert!(icons.contains(&icon_identity(&b, &f)));
        }
    }

    #[test]
    fn homs_differ_from_lax_with_noninvertible_cells() {
        // One object, one 1-cell, 2-cells the multiplicative monoid {1, 0}.
        use crate::bicategory::RawBicategory;
        use std::collections::BTreeMap;
        let raw = RawBicategory {
            objects: vec!["*".into()],
            one_cells: vec![("1".into(), "*".into(), "*".into())],
            two_cells: vec![
                ("m0".into(), "1".into(), "1".into()),
                ("m1".into(), "1".into(), "1".into()),
            ],
            id_one: BTreeMap::from([("*".into(), "1".into())]),
            id_two: BTreeMap::from([("1".into(), "m1".into())]),
            vcomp: vec![
                ("m0".into(), "m0".into(), "m0".into()),
                ("m0".into(), "m1".into(), "m0".into()),
                ("m1".into(), "m0".into(), "m0".into()),
                ("m1".into(), "m1".into(), "m1".into()),
            ],
            hcomp_one: vec![("1".into(), "1".into(), "1".into())],
            hcomp_two: vec![
                ("m0".into(), "m0".into(), "m0".into()),
                ("m0".into(), "m1".into(), "m0".into()),
                ("m1".into(), "m0".into(), "m0".into()),
                ("m1".into(), "m1".into(), "m1".into()),
            ],
            associator: vec![("1".into(), "1".into(), "1".into(), "m1".into())],
            lunitor: BTreeMap::from([("1".into(), "m1".into())]),
            runitor: BTreeMap::from([("1".into(), "m1".into())]),
        };
        let b = crate::bicategory::FinBicategory::validate(&raw).unwrap();
        // β_012 free in the monoid: both values satisfy the tetrahedron.
        assert_eq!(enumerate_normal_lax(&b, 2).len(), 2);
        assert_eq!(enumerate_normal_homs(&b, 2).len(), 1);
    }

    #[test]
    fn enumerated_lax_functors_pass_their_own_check() {
        for (_, b) in fixtures::bicategory_fixtures() {
            for n in 0..=3 {
                for nl in enumerate_normal_lax(&b, n) {
                    nl.check(&b).unwrap();
                }
            }
        }
    }
}
