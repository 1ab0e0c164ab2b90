//! Augmentations of linear-order nerves, continuous normal lax functors
//! out of an order, and bisimplicial augmentations of products of two
//! orders.

use std::collections::HashMap;

use crate::bicategory::{enumerate_normal_lax, pairs_le, triples_le, FinBicategory, NormalLax};
use crate::category::{nerve_of_order, LinearOrder, OrderNerve};
use crate::finspace::{fibre_product, FinSpace, Pullback};
use crate::simplicial::{SimplicialError, TruncBiSSet, TruncSSet};

fn union_find_components(n: usize, related: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for a in 0..n {
        for b in 0..n {
            if related(a, b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    // Normalize to the index of each component's least member.
    let mut least: HashMap<usize, usize> = HashMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        let e = least.entry(r).or_insert(x);
        if x < *e {
            *e = x;
        }
    }
    (0..n).map(|x| least[&find(&mut parent, x)]).collect()
}

fn components_of_space(space: &FinSpace) -> (Vec<usize>, Vec<Vec<usize>>) {
    let comp_of = union_find_components(space.len(), |a, b| space.leq(a, b));
    let mut reps: Vec<usize> = comp_of.clone();
    reps.sort_unstable();
    reps.dedup();
    let comps: Vec<Vec<usize>> = reps
        .iter()
        .map(|&r| (0..space.len()).filter(|&x| comp_of[x] == r).collect())
        .collect();
    let renumber: HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let comp_of = comp_of.into_iter().map(|r| renumber[&r]).collect();
    (comp_of, comps)
}

/// A levelwise map from the nerve of a linear order into a (discrete)
/// truncated simplicial set, commuting with all operators in range.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Augmentation {
    /// maps[n][chain cell] = target cell index.
    pub maps: Vec<Vec<usize>>,
}

/// Checks that the maps commute with faces and degeneracies and are
/// continuous (constant along specialization of the chain spaces).
pub fn validate_augmentation(
    nerve: &OrderNerve,
    target: &TruncSSet,
    aug: &Augmentation,
) -> Result<(), String> {
    let maxdim = nerve.maxdim().min(target.maxdim());
    if aug.maps.len() != maxdim + 1 {
        return Err("augmentation level count".into());
    }
    for n in 0..=maxdim {
        if aug.maps[n].len() != nerve.cell_count(n) {
            return Err(format!("augmentation size at level {n}"));
        }
        if let Some(&bad) = aug.maps[n].iter().find(|&&v| v >= target.cell_count(n)) {
            return Err(format!("augmentation hits out-of-range cell {bad} at level {n}"));
        }
        // Continuity into a discrete target.
        let total = nerve.level(n).total();
        for a in 0..total.len() {
            for b in 0..total.len() {
                if total.leq(a, b) && aug.maps[n][a] != aug.maps[n][b] {
                    return Err(format!("augmentation not continuous at level {n}"));
                }
            }
        }
    }
    for n in 1..=maxdim {
        for i in 0..=n {
            for c in 0..nerve.cell_count(n) {
                if target.face(n, i, aug.maps[n][c]) != aug.maps[n - 1][nerve.face(n, i, c)] {
                    return Err(format!("augmentation does not commute with d_{i} at level {n}"));
                }
            }
        }
    }
    for n in 0..maxdim {
        for i in 0..=n {
            for c in 0..nerve.cell_count(n) {
                if target.degen(n, i, aug.maps[n][c]) != aug.maps[n + 1][nerve.degen(n, i, c)] {
                    return Err(format!("augmentation does not commute with s_{i} at level {n}"));
                }
            }
        }
    }
    Ok(())
}

/// All augmentations `N L → N` up to the truncation, canonically ordered.
/// Works level by level; within a level the candidates of distinct
/// connected components are independent.
pub fn enumerate_augmentations(
    l: &LinearOrder,
    target: &TruncSSet,
    maxdim: usize,
) -> Result<Vec<Augmentation>, SimplicialError> {
    let maxdim = maxdim.min(target.maxdim());
    let nerve = nerve_of_order(l, maxdim)
        .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
    let comps: Vec<(Vec<usize>, Vec<Vec<usize>>)> =
        (0..=maxdim).map(|n| components_of_space(nerve.level(n).total())).collect();
    let mut out = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    assign_level(&nerve, target, maxdim, &comps, &mut maps, &mut out);
    out.sort();
    Ok(out)
}

fn assign_level(
    nerve: &OrderNerve,
    target: &TruncSSet,
    maxdim: usize,
    comps: &[(Vec<usize>, Vec<Vec<usize>>)],
    maps: &mut Vec<Vec<usize>>,
    out: &mut Vec<Augmentation>,
) {
    let n = maps.len();
    if n > maxdim {
        out.push(Augmentation { maps: maps.clone() });
        return;
    }
    // Candidate target cells per component.
    let (_, components) = &comps[n];
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(components.len());
    for comp in components {
        let mut cands: Vec<usize> = (0..target.cell_count(n)).collect();
        for &c in comp {
            cands.retain(|&v| {
                if n >= 1 {
                    for i in 0..=n {
                        if target.face(n, i, v) != maps[n - 1][nerve.face(n, i, c)] {
                            return false;
                        }
                    }
                }
                true
            });
            if n >= 1 {
                // Degenerate cells are forced from below.
                for i in 0..n {
                    let w = nerve.face(n, i, c);
                    if nerve.degen(n - 1, i, w) == c {
                        let forced = target.degen(n - 1, i, maps[n - 1][w]);
                        cands.retain(|&v| v == forced);
                    }
                }
            }
            if cands.is_empty() {
                break;
            }
        }
        if cands.is_empty() {
            return;
        }
        candidates.push(cands);
    }
    // Cartesian product over components.
    let mut chosen = vec![0usize; components.len()];
    product_rec(0, &candidates, &mut chosen, &mut |chosen| {
        let mut level = vec![0usize; nerve.cell_count(n)];
        for (ci, comp) in components.iter().enumerate() {
            for &c in comp {
                level[c] = chosen[ci];
            }
        }
        maps.push(level);
        assign_level(nerve, target, maxdim, comps, maps, out);
        maps.pop();
    });
}

fn product_rec(
    i: usize,
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if i == candidates.len() {
        visit(chosen);
        return;
    }
    for &v in &candidates[i] {
        chosen[i] = v;
        product_rec(i + 1, candidates, chosen, visit);
    }
}

// ---------------------------------------------------------------------------
// Continuous normal lax functors out of the order category
// ---------------------------------------------------------------------------

/// A continuous normal lax functor from the order category of `L` (viewed
/// as a locally discrete topological bicategory) into `B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderLax {
    /// Object of `B` per point of the total space of `L`.
    pub objects: Vec<usize>,
    /// 1-cell per order pair (indexed like `LinearOrder::pairs`).
    pub one: Vec<usize>,
    /// 2-cell per 2-chain (indexed like the level-2 chains of the nerve).
    pub two: Vec<usize>,
}

struct OrderLaxSearch<'a> {
    b: &'a FinBicategory,
    l: &'a LinearOrder,
    nerve: &'a OrderNerve,
    pair_index: &'a HashMap<(usize, usize), usize>,
    l_comps: &'a (Vec<usize>, Vec<Vec<usize>>),
    o_comps: &'a (Vec<usize>, Vec<Vec<usize>>),
    c2_comps: &'a (Vec<usize>, Vec<Vec<usize>>),
    chain3_ready: &'a [Vec<usize>],
    objects: Vec<usize>,
    one: Vec<usize>,
    two: Vec<usize>,
    out: Vec<OrderLax>,
}

/// All continuous normal lax functors from the order to the bicategory,
/// canonically sorted. This is the Duskin-side oracle for augmentations.
pub fn enumerate_normal_lax_from_order(l: &LinearOrder, b: &FinBicategory) -> Vec<OrderLax> {
    let nerve = nerve_of_order(l, 3).expect("order nerve to level 3");
    let total = l.sheaf().total();
    let pairs = l.pairs();
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let l_comps = components_of_space(total);
    // Components of the order subsheaf O inside L ×_X L.
    let o_comp_of = union_find_components(pairs.len(), |a, b| {
        total.leq(pairs[a].0, pairs[b].0) && total.leq(pairs[a].1, pairs[b].1)
    });
    let o_comps = comps_from_ids(o_comp_of);
    let c2_comps = components_of_space(nerve.level(2).total());
    // Readiness of each 3-chain: the last 2-chain component among its faces.
    let chain3_count = nerve.cell_count(3);
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); c2_comps.1.len().max(1)];
    for c3 in 0..chain3_count {
        let faces: Vec<usize> =
            (0..=3).map(|i| c2_comps.0[nerve.face(3, i, c3)]).collect();
        let r = faces.into_iter().max().unwrap();
        ready[r].push(c3);
    }
    let mut search = OrderLaxSearch {
        b,
        l,
        nerve: &nerve,
        pair_index: &pair_index,
        l_comps: &l_comps,
        o_comps: &o_comps,
        c2_comps: &c2_comps,
        chain3_ready: &ready,
        objects: vec![usize::MAX; total.len()],
        one: vec![usize::MAX; pairs.len()],
        two: vec![usize::MAX; nerve.cell_count(2)],
        out: Vec::new(),
    };
    search.assign_object_comp(0);
    let mut out = search.out;
    out.sort();
    out
}

fn comps_from_ids(comp_of: Vec<usize>) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut reps: Vec<usize> = comp_of.clone();
    reps.sort_unstable();
    reps.dedup();
    let comps = reps
        .iter()
        .map(|&r| (0..comp_of.len()).filter(|&x| comp_of[x] == r).collect())
        .collect();
    let renumber: HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    (comp_of.into_iter().map(|r| renumber[&r]).collect(), comps)
}

impl<'a> OrderLaxSearch<'a> {
    fn assign_object_comp(&mut self, ci: usize) {
        if ci == self.l_comps.1.len() {
            self.assign_one_comp(0);
            return;
        }
        for o in 0..self.b.object_count() {
            for &e in &self.l_comps.1[ci] {
                self.objects[e] = o;
            }
            self.assign_object_comp(ci + 1);
        }
        for &e in &self.l_comps.1[ci] {
            self.objects[e] = usize::MAX;
        }
    }

    fn assign_one_comp(&mut self, ci: usize) {
        if ci == self.o_comps.1.len() {
            self.assign_two_comp(0);
            return;
        }
        let members = &self.o_comps.1[ci];
        // Candidates: 1-cells B_{e'} → B_e valid for every member (e, e');
        // diagonal members force the identity.
        let pairs = self.l.pairs();
        let mut cands: Vec<usize> = {
            let (e, e2) = pairs[members[0]];
            self.b.hom_one(self.objects[e2], self.objects[e])
        };
        for &p in members {
            let (e, e2) = pairs[p];
            cands.retain(|&f| {
                self.b.one_cell(f).src == self.objects[e2]
                    && self.b.one_cell(f).tgt == self.objects[e]
            });
            if e == e2 {
                cands.retain(|&f| f == self.b.id_one(self.objects[e]));
            }
        }
        for f in cands {
            for &p in members {
                self.one[p] = f;
            }
            self.assign_one_comp(ci + 1);
        }
        for &p in members {
            self.one[p] = usize::MAX;
        }
    }

    fn one_of(&self, a: usize, b: usize) -> usize {
        self.one[self.pair_index[&(a, b)]]
    }

    fn assign_two_comp(&mut self, ci: usize) {
        if ci == self.c2_comps.1.len() {
            self.out.push(OrderLax {
                objects: self.objects.clone(),
                one: self.one.clone(),
                two: self.two.clone(),
            });
            return;
        }
        let members = &self.c2_comps.1[ci];
        let mut cands: Vec<usize> = {
            let ch = self.nerve.chain(2, members[0]);
            let src = self.b.hc1(self.one_of(ch[0], ch[1]), self.one_of(ch[1], ch[2]));
            self.b.hom_two(src, self.one_of(ch[0], ch[2]))
        };
        for &c in members {
            let ch = self.nerve.chain(2, c).to_vec();
            let src = self.b.hc1(self.one_of(ch[0], ch[1]), self.one_of(ch[1], ch[2]));
            let tgt = self.one_of(ch[0], ch[2]);
            cands.retain(|&t| {
                self.b.two_cell(t).src == src && self.b.two_cell(t).tgt == tgt
            });
            if ch[0] == ch[1] {
                cands.retain(|&t| t == self.b.lunit(self.one_of(ch[0], ch[2])));
            }
            if ch[1] == ch[2] {
                cands.retain(|&t| t == self.b.runit(self.one_of(ch[0], ch[1])));
            }
        }
        for t in cands {
            for &c in members {
                self.two[c] = t;
            }
            if self.chain3_ready[ci].iter().all(|&c3| self.coherent(c3)) {
                self.assign_two_comp(ci + 1);
            }
        }
        for &c in members {
            self.two[c] = usize::MAX;
        }
    }

    fn two_of(&self, y0: usize, y1: usize, y2: usize) -> usize {
        let idx = self
            .nerve
            .chains_index(2, &[y0, y1, y2])
            .expect("2-chain exists");
        self.two[idx]
    }

    fn coherent(&self, c3: usize) -> bool {
        let ch = self.nerve.chain(3, c3);
        let (y0, y1, y2, y3) = (ch[0], ch[1], ch[2], ch[3]);
        let b = self.b;
        let lhs = b.vc(
            self.two_of(y0, y2, y3),
            b.whisker_r(self.two_of(y0, y1, y2), self.one_of(y2, y3)),
        );
        let rhs = b.vc(
            self.two_of(y0, y1, y3),
            b.vc(
                b.whisker_l(self.one_of(y0, y1), self.two_of(y1, y2, y3)),
                b.alpha(
                    self.one_of(y0, y1),
                    self.one_of(y1, y2),
                    self.one_of(y2, y3),
                ),
            ),
        );
        lhs == rhs
    }
}

// ---------------------------------------------------------------------------
// The explicit bijection of the two descriptions
// ---------------------------------------------------------------------------

/// The augmentation induced by a continuous normal lax functor: a chain is
/// sent to the lax functor it traces out.
pub fn aug_from_lax(
    l: &LinearOrder,
    nerve: &OrderNerve,
    b: &FinBicategory,
    duskin: &TruncSSet,
    lax: &OrderLax,
) -> Augmentation {
    let pairs = l.pairs();
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let maxdim = nerve.maxdim().min(duskin.maxdim());
    let mut maps = Vec::new();
    for n in 0..=maxdim {
        let mut level = Vec::with_capacity(nerve.cell_count(n));
        for c in 0..nerve.cell_count(n) {
            let ch = nerve.chain(n, c);
            let nl = NormalLax {
                n,
                objects: ch.iter().map(|&y| lax.objects[y]).collect(),
                one: pairs_le(n)
                    .into_iter()
                    .map(|(i, j)| lax.one[pair_index[&(ch[i], ch[j])]])
                    .collect(),
                two: triples_le(n)
                    .into_iter()
                    .map(|(i, j, k)| {
                        let idx = nerve
                            .chains_index(2, &[ch[i], ch[j], ch[k]])
                            .expect("2-chain exists");
                        lax.two[idx]
                    })
                    .collect(),
            };
            level.push(
                duskin
                    .cell_index(n, &nl.encode(b))
                    .expect("traced lax functor is a nerve cell"),
            );
        }
        maps.push(level);
    }
    Augmentation { maps }
}

/// The continuous normal lax functor recovered from an augmentation by
/// evaluating it on vertices, order pairs, and 2-chains.
pub fn lax_from_aug(
    l: &LinearOrder,
    nerve: &OrderNerve,
    b: &FinBicategory,
    duskin: &TruncSSet,
    aug: &Augmentation,
) -> OrderLax {
    let decode: Vec<HashMap<String, NormalLax>> = (0..=2)
        .map(|n| {
            enumerate_normal_lax(b, n)
                .into_iter()
                .map(|nl| (nl.encode(b), nl))
                .collect()
        })
        .collect();
    let cell = |n: usize, c: usize| -> &NormalLax {
        &decode[n][duskin.cell_id(n, aug.maps[n][c])]
    };
    let total = l.sheaf().total();
    let mut objects = vec![0usize; total.len()];
    for e in 0..total.len() {
        let c = nerve.chains_index(0, &[e]).expect("vertex chain");
        objects[e] = cell(0, c).objects[0];
    }
    let pairs = l.pairs();
    let mut one = vec![0usize; pairs.len()];
    for (i, &(a, bb)) in pairs.iter().enumerate() {
        let c = nerve.chains_index(1, &[a, bb]).expect("order pair chain");
        one[i] = cell(1, c).f(0, 1);
    }
    let mut two = vec![0usize; nerve.cell_count(2)];
    for c in 0..nerve.cell_count(2) {
        two[c] = cell(2, c).beta(0, 1, 2);
    }
    OrderLax { objects, one, two }
}

// ---------------------------------------------------------------------------
// Lin²: bisimplicial augmentations of a product of two orders
// ---------------------------------------------------------------------------

/// A bisimplicial map from the levelwise fibre product `NL ×_X NL'` into a
/// (discrete) bisimplicial set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lin2Aug {
    /// maps[n][m][product cell] = target cell.
    pub maps: Vec<Vec<Vec<usize>>>,
}

/// All bisimplicial maps `NL ×_X NL' → Y` within the truncation.
pub fn enumerate_lin2(
    l: &LinearOrder,
    l2: &LinearOrder,
    y: &TruncBiSSet,
) -> Result<Vec<Lin2Aug>, SimplicialError> {
    if l.base() != l2.base() {
        return Err(SimplicialError::Malformed("orders live over different spaces".into()));
    }
    let (hdim, vdim) = (y.hdim(), y.vdim());
    let nl = nerve_of_order(l, hdim).map_err(|e| SimplicialError::Malformed(e.to_string()))?;
    let nl2 = nerve_of_order(l2, vdim).map_err(|e| SimplicialError::Malformed(e.to_string()))?;
    // Fibre products of the chain spaces, with pair indices.
    let mut prods: Vec<Vec<(Pullback, HashMap<(usize, usize), usize>)>> = Vec::new();
    for n in 0..=hdim {
        let mut row = Vec::new();
        for m in 0..=vdim {
            let pb = fibre_product(nl.level(n), nl2.level(m))
                .map_err(|e| SimplicialError::Malformed(e.to_string()))?;
            let idx: HashMap<(usize, usize), usize> =
                pb.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            row.push((pb, idx));
        }
        prods.push(row);
    }
    let comps: Vec<Vec<(Vec<usize>, Vec<Vec<usize>>)>> = (0..=hdim)
        .map(|n| {
            (0..=vdim)
                .map(|m| components_of_space(prods[n][m].0.space.total()))
                .collect()
        })
        .collect();
    // Assign levels in order of total degree.
    let mut order: Vec<(usize, usize)> = Vec::new();
    for d in 0..=(hdim + vdim) {
        for n in 0..=hdim.min(d) {
            let m = d - n;
            if m <= vdim {
                order.push((n, m));
            }
        }
    }
    let mut maps: Vec<Vec<Vec<usize>>> = (0..=hdim).map(|_| vec![Vec::new(); vdim + 1]).collect();
    let mut out = Vec::new();
    lin2_assign(&LinCtx { nl: &nl, nl2: &nl2, y, prods: &prods, comps: &comps, order: &order },
        0, &mut maps, &mut out);
    out.sort();
    Ok(out)
}

struct LinCtx<'a> {
    nl: &'a OrderNerve,
    nl2: &'a OrderNerve,
    y: &'a TruncBiSSet,
    prods: &'a [Vec<(Pullback, HashMap<(usize, usize), usize>)>],
    comps: &'a [Vec<(Vec<usize>, Vec<Vec<usize>>)>],
    order: &'a [(usize, usize)],
}

fn lin2_assign(
    ctx: &LinCtx<'_>,
    step: usize,
    maps: &mut Vec<Vec<Vec<usize>>>,
    out: &mut Vec<Lin2Aug>,
) {
    if step == ctx.order.len() {
        out.push(Lin2Aug { maps: maps.clone() });
        return;
    }
    let (n, m) = ctx.order[step];
    let (pb, _) = &ctx.prods[n][m];
    let (_, components) = &ctx.comps[n][m];
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(components.len());
    for comp in components {
        let mut cands: Vec<usize> = (0..ctx.y.cell_count(n, m)).collect();
        for &cell in comp {
            let (a, b) = pb.pairs[cell];
            // Horizontal faces and forced degeneracies.
            if n >= 1 {
                for i in 0..=n {
                    let img = ctx.prods[n - 1][m].1[&(ctx.nl.face(n, i, a), b)];
                    let want = maps[n - 1][m][img];
                    cands.retain(|&v| ctx.y.h_face(n, m, i, v) == want);
                }
                for i in 0..n {
                    let a2 = ctx.nl.face(n, i, a);
                    if ctx.nl.degen(n - 1, i, a2) == a {
                        let img = ctx.prods[n - 1][m].1[&(a2, b)];
                        let forced = ctx.y.h_degen(n - 1, m, i, maps[n - 1][m][img]);
                        cands.retain(|&v| v == forced);
                    }
                }
            }
            if m >= 1 {
                for i in 0..=m {
                    let img = ctx.prods[n][m - 1].1[&(a, ctx.nl2.face(m, i, b))];
                    let want = maps[n][m - 1][img];
                    cands.retain(|&v| ctx.y.v_face(n, m, i, v) == want);
                }
                for i in 0..m {
                    let b2 = ctx.nl2.face(m, i, b);
                    if ctx.nl2.degen(m - 1, i, b2) == b {
                        let img = ctx.prods[n][m - 1].1[&(a, b2)];
                        let forced = ctx.y.v_degen(n, m - 1, i, maps[n][m - 1][img]);
                        cands.retain(|&v| v == forced);
                    }
                }
            }
            if cands.is_empty() {
                return;
            }
        }
        candidates.push(cands);
    }
    let mut chosen = vec![0usize; components.len()];
    product_rec(0, &candidates, &mut chosen, &mut |chosen| {
        let mut level = vec![0usize; pb.pairs.len()];
        for (ci, comp) in components.iter().enumerate() {
            for &c in comp {
                level[c] = chosen[ci];
            }
        }
        maps[n][m] = level;
        lin2_assign(ctx, step + 1, maps, out);
        maps[n][m] = Vec::new();
    });
}
