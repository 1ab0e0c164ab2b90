//! s-étale topological categories (source map étale), sheaves with a
//! category action, and the Grothendieck construction on diagrams of
//! spaces.

use std::collections::HashMap;

use crate::category::FinCategory;
use crate::finspace::{composite_id, EtaleSpace, FinSpace};
use crate::principal::{PrincipalError, PrincipalFailure, PrincipalReport};

/// A topological category with finite spaces of objects and arrows whose
/// source map is étale.
#[derive(Debug, Clone)]
pub struct SEtaleCategory {
    pub objects_space: FinSpace,
    pub arrows_space: FinSpace,
    src: Vec<usize>,
    tgt: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    identity: Vec<usize>,
}

impl SEtaleCategory {
    pub fn validate(
        objects_space: FinSpace,
        arrows_space: FinSpace,
        src: Vec<usize>,
        tgt: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
        identity: Vec<usize>,
    ) -> Result<Self, PrincipalError> {
        let m = |e: String| PrincipalError::Malformed(e);
        EtaleSpace::validate(arrows_space.clone(), objects_space.clone(), src.clone())
            .map_err(|e| m(format!("source map is not etale: {e}")))?;
        crate::finspace::ContinuousMap::validate(
            arrows_space.clone(),
            objects_space.clone(),
            tgt.clone(),
        )
        .map_err(|e| m(format!("target map not continuous: {e}")))?;
        crate::finspace::ContinuousMap::validate(
            objects_space.clone(),
            arrows_space.clone(),
            identity.clone(),
        )
        .map_err(|e| m(format!("identity map not continuous: {e}")))?;
        let cat = SEtaleCategory { objects_space, arrows_space, src, tgt, compose, identity };
        cat.check()?;
        Ok(cat)
    }

    fn check(&self) -> Result<(), PrincipalError> {
        let m = |e: String| PrincipalError::Malformed(e);
        let n = self.arrows_space.len();
        for (x, &e) in self.identity.iter().enumerate() {
            if self.src[e] != x || self.tgt[e] != x {
                return Err(m(format!(
                    "identity of `{}` has wrong endpoints",
                    self.objects_space.point_id(x)
                )));
            }
        }
        for g in 0..n {
            for f in 0..n {
                let composable = self.src[g] == self.tgt[f];
                match self.compose.get(&(g, f)) {
                    Some(&gf) if composable => {
                        if self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] {
                            return Err(m(format!(
                                "ill-typed composite of ({}, {})",
                                self.arrows_space.point_id(g),
                                self.arrows_space.point_id(f)
                            )));
                        }
                    }
                    Some(_) => return Err(m("composite of non-composable pair".into())),
                    None if composable => {
                        return Err(m(format!(
                            "missing composite of ({}, {})",
                            self.arrows_space.point_id(g),
                            self.arrows_space.point_id(f)
                        )))
                    }
                    None => {}
                }
            }
        }
        // Continuity of composition on the fibre product of composable pairs.
        for g in 0..n {
            for f in 0..n {
                if self.src[g] != self.tgt[f] {
                    continue;
                }
                for g2 in 0..n {
                    for f2 in 0..n {
                        if self.src[g2] != self.tgt[f2] {
                            continue;
                        }
                        if self.arrows_space.leq(g, g2)
                            && self.arrows_space.leq(f, f2)
                            && !self
                                .arrows_space
                                .leq(self.compose[&(g, f)], self.compose[&(g2, f2)])
                        {
                            return Err(m("composition is not continuous".into()));
                        }
                    }
                }
            }
        }
        for f in 0..n {
            if self.compose[&(f, self.identity[self.src[f]])] != f
                || self.compose[&(self.identity[self.tgt[f]], f)] != f
            {
                return Err(m(format!(
                    "unit law fails at `{}`",
                    self.arrows_space.point_id(f)
                )));
            }
        }
        for f in 0..n {
            for g in 0..n {
                if self.tgt[f] != self.src[g] {
                    continue;
                }
                for h in 0..n {
                    if self.tgt[g] != self.src[h] {
                        continue;
                    }
                    let hg_f = self.compose[&(self.compose[&(h, g)], f)];
                    let h_gf = self.compose[&(h, self.compose[&(g, f)])];
                    if hg_f != h_gf {
                        return Err(m("composition not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose[&(g, f)]
    }

    pub fn identity_of(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows_space.len()
    }

    /// A finite category with the discrete topology.
    pub fn discrete(cat: &FinCategory) -> Self {
        let objects_space = FinSpace::discrete(&cat.objects().to_vec()).expect("discrete objects");
        let ids: Vec<String> = (0..cat.arrow_count()).map(|a| cat.arrow(a).id.clone()).collect();
        let arrows_space = FinSpace::discrete(&ids).expect("discrete arrows");
        // Index translation: spaces sort their points.
        let _ = &arrows_space;
        let arrow_of = |id: &str| arrows_space.index_of(id).expect("arrow point");
        let object_of = |id: &str| objects_space.index_of(id).expect("object point");
        let mut src = vec![0; cat.arrow_count()];
        let mut tgt = vec![0; cat.arrow_count()];
        for a in 0..cat.arrow_count() {
            let p = arrow_of(&cat.arrow(a).id);
            src[p] = object_of(cat.object_id(cat.src(a)));
            tgt[p] = object_of(cat.object_id(cat.tgt(a)));
        }
        let mut compose = HashMap::new();
        for g in 0..cat.arrow_count() {
            for f in 0..cat.arrow_count() {
                if cat.tgt(f) == cat.src(g) {
                    compose.insert(
                        (arrow_of(&cat.arrow(g).id), arrow_of(&cat.arrow(f).id)),
                        arrow_of(&cat.arrow(cat.comp(g, f)).id),
                    );
                }
            }
        }
        let mut identity = vec![0; cat.object_count()];
        for o in 0..cat.object_count() {
            identity[object_of(cat.object_id(o))] = arrow_of(&cat.arrow(cat.identity_of(o)).id);
        }
        SEtaleCategory::validate(objects_space, arrows_space, src, tgt, compose, identity)
            .expect("discrete category is s-etale")
    }
}

/// A `ℂ`-sheaf: an étale space over the object space with a continuous
/// right action `x·f` defined when `p(x) = t(f)`.
#[derive(Debug, Clone)]
pub struct CSheaf {
    pub cat: SEtaleCategory,
    pub sheaf: EtaleSpace,
    action: HashMap<(usize, usize), usize>,
}

impl CSheaf {
    pub fn validate(
        cat: SEtaleCategory,
        sheaf: EtaleSpace,
        action: HashMap<(usize, usize), usize>,
    ) -> Result<Self, PrincipalError> {
        let m = |e: String| PrincipalError::Malformed(e);
        if sheaf.base() != &cat.objects_space {
            return Err(m("sheaf does not live over the object space".into()));
        }
        let s = CSheaf { cat, sheaf, action };
        let total = s.sheaf.total().len();
        let arrows = s.cat.arrow_count();
        for x in 0..total {
            for f in 0..arrows {
                let defined = s.sheaf.proj(x) == s.cat.tgt(f);
                match s.action.get(&(x, f)) {
                    Some(&xf) if defined => {
                        if s.sheaf.proj(xf) != s.cat.src(f) {
                            return Err(m(format!(
                                "p(x·f) ≠ s(f) at ({}, {})",
                                s.sheaf.total().point_id(x),
                                s.cat.arrows_space.point_id(f)
                            )));
                        }
                    }
                    Some(_) => return Err(m("action defined off the fibre product".into())),
                    None if defined => {
                        return Err(m(format!(
                            "missing action value at ({}, {})",
                            s.sheaf.total().point_id(x),
                            s.cat.arrows_space.point_id(f)
                        )))
                    }
                    None => {}
                }
            }
        }
        // Continuity on the fibre product.
        for (&(x, f), &xf) in &s.action {
            for (&(x2, f2), &xf2) in &s.action {
                if s.sheaf.total().leq(x, x2)
                    && s.cat.arrows_space.leq(f, f2)
                    && !s.sheaf.total().leq(xf, xf2)
                {
                    return Err(m("action is not continuous".into()));
                }
            }
        }
        // Unit and associativity.
        for x in 0..total {
            if s.action[&(x, s.cat.identity_of(s.sheaf.proj(x)))] != x {
                return Err(m(format!(
                    "x·id ≠ x at {}",
                    s.sheaf.total().point_id(x)
                )));
            }
        }
        for x in 0..total {
            for f in 0..arrows {
                if s.sheaf.proj(x) != s.cat.tgt(f) {
                    continue;
                }
                let xf = s.action[&(x, f)];
                for g in 0..arrows {
                    if s.cat.src(f) != s.cat.tgt(g) {
                        continue;
                    }
                    // (x·f)·g = x·(f∘g).
                    if s.action[&(xf, g)] != s.action[&(x, s.cat.comp(f, g))] {
                        return Err(m("action does not respect composition".into()));
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn act(&self, x: usize, f: usize) -> usize {
        self.action[&(x, f)]
    }
}

/// The Def-5.9 data: an étale space over `X` with an anchor into the
/// object space and a continuous fibrewise left action.
#[derive(Debug, Clone)]
pub struct SEtaleBundle {
    pub cat: SEtaleCategory,
    pub sheaf: EtaleSpace,
    anchor: Vec<usize>,
    action: HashMap<(usize, usize), usize>,
}

impl SEtaleBundle {
    pub fn validate(
        cat: SEtaleCategory,
        sheaf: EtaleSpace,
        anchor: Vec<usize>,
        action: HashMap<(usize, usize), usize>,
    ) -> Result<Self, PrincipalError> {
        let m = |e: String| PrincipalError::Malformed(e);
        crate::finspace::ContinuousMap::validate(
            sheaf.total().clone(),
            cat.objects_space.clone(),
            anchor.clone(),
        )
        .map_err(|e| m(format!("anchor not continuous: {e}")))?;
        let b = SEtaleBundle { cat, sheaf, anchor, action };
        let total = b.sheaf.total().len();
        for f in 0..b.cat.arrow_count() {
            for y in 0..total {
                let defined = b.cat.src(f) == b.anchor[y];
                match b.action.get(&(f, y)) {
                    Some(&fy) if defined => {
                        if b.anchor[fy] != b.cat.tgt(f) {
                            return Err(m("π(f·y) ≠ t(f)".into()));
                        }
                        if b.sheaf.proj(fy) != b.sheaf.proj(y) {
                            return Err(m("action is not fibrewise over the base".into()));
                        }
                    }
                    Some(_) => return Err(m("action defined off the fibre product".into())),
                    None if defined => {
                        return Err(m(format!(
                            "missing action value at ({}, {})",
                            b.cat.arrows_space.point_id(f),
                            b.sheaf.total().point_id(y)
                        )))
                    }
                    None => {}
                }
            }
        }
        for (&(f, y), &fy) in &b.action {
            for (&(f2, y2), &fy2) in &b.action {
                if b.cat.arrows_space.leq(f, f2)
                    && b.sheaf.total().leq(y, y2)
                    && !b.sheaf.total().leq(fy, fy2)
                {
                    return Err(m("action is not continuous".into()));
                }
            }
        }
        for y in 0..total {
            if b.action[&(b.cat.identity_of(b.anchor[y]), y)] != y {
                return Err(m("id·y ≠ y".into()));
            }
        }
        for y in 0..total {
            for f in 0..b.cat.arrow_count() {
                if b.cat.src(f) != b.anchor[y] {
                    continue;
                }
                let fy = b.action[&(f, y)];
                for g in 0..b.cat.arrow_count() {
                    if b.cat.src(g) != b.cat.tgt(f) {
                        continue;
                    }
                    if b.action[&(b.cat.comp(g, f), y)] != b.action[&(g, fy)] {
                        return Err(m("action does not respect composition".into()));
                    }
                }
            }
        }
        Ok(b)
    }

    pub fn anchor(&self, y: usize) -> usize {
        self.anchor[y]
    }

    pub fn act(&self, f: usize, y: usize) -> usize {
        self.action[&(f, y)]
    }
}

/// The stalkwise filtering conditions for an s-étale bundle: non-emptiness,
/// transitivity and freeness at every point of the base.
pub fn is_principal_setale(b: &SEtaleBundle) -> PrincipalReport {
    let mut failures = Vec::new();
    let base = b.sheaf.base();
    for x in 0..base.len() {
        let point = base.point_id(x).to_string();
        let stalk = b.sheaf.stalk(x);
        if stalk.is_empty() {
            failures.push(PrincipalFailure::Emptiness { point: point.clone() });
            continue;
        }
        // (ii) transitivity.
        'trans: for &y in &stalk {
            for &z in &stalk {
                let mut found = false;
                'search: for &w in &stalk {
                    for alpha in 0..b.cat.arrow_count() {
                        if b.cat.src(alpha) != b.anchor(w) || b.cat.tgt(alpha) != b.anchor(y) {
                            continue;
                        }
                        if b.act(alpha, w) != y {
                            continue;
                        }
                        for beta in 0..b.cat.arrow_count() {
                            if b.cat.src(beta) == b.anchor(w)
                                && b.cat.tgt(beta) == b.anchor(z)
                                && b.act(beta, w) == z
                            {
                                found = true;
                                break 'search;
                            }
                        }
                    }
                }
                if !found {
                    failures.push(PrincipalFailure::Transitivity {
                        point: point.clone(),
                        c: b.cat.objects_space.point_id(b.anchor(y)).to_string(),
                        y: b.sheaf.total().point_id(y).to_string(),
                        d: b.cat.objects_space.point_id(b.anchor(z)).to_string(),
                        z: b.sheaf.total().point_id(z).to_string(),
                    });
                    break 'trans;
                }
            }
        }
        // (iii) freeness.
        'free: for &y in &stalk {
            for alpha in 0..b.cat.arrow_count() {
                if b.cat.src(alpha) != b.anchor(y) {
                    continue;
                }
                for beta in 0..b.cat.arrow_count() {
                    if b.cat.src(beta) != b.anchor(y) || b.cat.tgt(beta) != b.cat.tgt(alpha) {
                        continue;
                    }
                    if b.act(alpha, y) != b.act(beta, y) {
                        continue;
                    }
                    let mut found = false;
                    'search2: for &w in &stalk {
                        for gamma in 0..b.cat.arrow_count() {
                            if b.cat.src(gamma) != b.anchor(w)
                                || b.cat.tgt(gamma) != b.anchor(y)
                                || b.act(gamma, w) != y
                            {
                                continue;
                            }
                            if b.cat.comp(alpha, gamma) == b.cat.comp(beta, gamma) {
                                found = true;
                                break 'search2;
                            }
                        }
                    }
                    if !found {
                        failures.push(PrincipalFailure::Freeness {
                            point: point.clone(),
                            alpha: b.cat.arrows_space.point_id(alpha).to_string(),
                            beta: b.cat.arrows_space.point_id(beta).to_string(),
                            y: b.sheaf.total().point_id(y).to_string(),
                        });
                        break 'free;
                    }
                }
            }
        }
    }
    PrincipalReport { principal: failures.is_empty(), failures }
}

/// A covariant diagram of finite spaces over a finite category.
#[derive(Debug, Clone)]
pub struct DiagramOfSpaces {
    pub spaces: Vec<FinSpace>,
    /// Per arrow of the index category: a point map.
    pub maps: Vec<Vec<usize>>,
}

impl DiagramOfSpaces {
    pub fn validate(&self, k: &FinCategory) -> Result<(), PrincipalError> {
        let m = |e: String| PrincipalError::Malformed(e);
        if self.spaces.len() != k.object_count() || self.maps.len() != k.arrow_count() {
            return Err(m("diagram shape does not match the category".into()));
        }
        for a in 0..k.arrow_count() {
            crate::finspace::ContinuousMap::validate(
                self.spaces[k.src(a)].clone(),
                self.spaces[k.tgt(a)].clone(),
                self.maps[a].clone(),
            )
            .map_err(|e| m(format!("Y({}) not continuous: {e}", k.arrow(a).id)))?;
        }
        for o in 0..k.object_count() {
            let id = k.identity_of(o);
            if self.maps[id].iter().enumerate().any(|(p, &q)| p != q) {
                return Err(m(format!("Y(id_{}) not the identity", k.object_id(o))));
            }
        }
        for g in 0..k.arrow_count() {
            for f in 0..k.arrow_count() {
                if k.tgt(f) != k.src(g) {
                    continue;
                }
                let gf = k.comp(g, f);
                for p in 0..self.spaces[k.src(f)].len() {
                    if self.maps[gf][p] != self.maps[g][self.maps[f][p]] {
                        return Err(m("diagram is not functorial".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The Grothendieck construction: objects are pairs `(k, y)`, arrows
/// `(k,y) → (l,z)` are arrows `α: k → l` with `Y(α)(y) = z`, topologized
/// so that the source map is étale.
pub fn grothendieck_construction(
    k: &FinCategory,
    diagram: &DiagramOfSpaces,
) -> Result<SEtaleCategory, PrincipalError> {
    diagram.validate(k)?;
    // Objects: disjoint union of the Y_k with points `k|y`.
    let mut obj_points = Vec::new();
    let mut obj_owner: Vec<(usize, usize)> = Vec::new();
    for o in 0..k.object_count() {
        for p in 0..diagram.spaces[o].len() {
            obj_points
                .push(composite_id([k.object_id(o), diagram.spaces[o].point_id(p)]));
            obj_owner.push((o, p));
        }
    }
    let mut order: Vec<usize> = (0..obj_points.len()).collect();
    order.sort_by(|&a, &b| obj_points[a].cmp(&obj_points[b]));
    let obj_points: Vec<String> = order.iter().map(|&i| obj_points[i].clone()).collect();
    let obj_owner: Vec<(usize, usize)> = order.iter().map(|&i| obj_owner[i]).collect();
    let no = obj_points.len();
    let mut obj_leq = vec![vec![false; no]; no];
    for a in 0..no {
        for b in 0..no {
            obj_leq[a][b] = obj_owner[a].0 == obj_owner[b].0
                && diagram.spaces[obj_owner[a].0].leq(obj_owner[a].1, obj_owner[b].1);
        }
    }
    let objects_space = FinSpace::from_parts(obj_points, obj_leq)
        .map_err(|e| PrincipalError::Malformed(e.to_string()))?;
    let obj_index: HashMap<(usize, usize), usize> =
        obj_owner.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    // Arrows: one sheet of Y_{src α} per arrow α, points `α|y`.
    let mut arr_points = Vec::new();
    let mut arr_owner: Vec<(usize, usize)> = Vec::new();
    for a in 0..k.arrow_count() {
        let s = k.src(a);
        for p in 0..diagram.spaces[s].len() {
            arr_points
                .push(composite_id([k.arrow(a).id.as_str(), diagram.spaces[s].point_id(p)]));
            arr_owner.push((a, p));
        }
    }
    let mut order: Vec<usize> = (0..arr_points.len()).collect();
    order.sort_by(|&a, &b| arr_points[a].cmp(&arr_points[b]));
    let arr_points: Vec<String> = order.iter().map(|&i| arr_points[i].clone()).collect();
    let arr_owner: Vec<(usize, usize)> = order.iter().map(|&i| arr_owner[i]).collect();
    let na = arr_points.len();
    let mut arr_leq = vec![vec![false; na]; na];
    for a in 0..na {
        for b in 0..na {
            arr_leq[a][b] = arr_owner[a].0 == arr_owner[b].0
                && diagram.spaces[k.src(arr_owner[a].0)].leq(arr_owner[a].1, arr_owner[b].1);
        }
    }
    let arrows_space = FinSpace::from_parts(arr_points, arr_leq)
        .map_err(|e| PrincipalError::Malformed(e.to_string()))?;
    let arr_index: HashMap<(usize, usize), usize> =
        arr_owner.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let src: Vec<usize> =
        arr_owner.iter().map(|&(a, p)| obj_index[&(k.src(a), p)]).collect();
    let tgt: Vec<usize> = arr_owner
        .iter()
        .map(|&(a, p)| obj_index[&(k.tgt(a), diagram.maps[a][p])])
        .collect();
    let mut compose = HashMap::new();
    for gi in 0..na {
        for fi in 0..na {
            if src[gi] != tgt[fi] {
                continue;
            }
            let (g, _) = arr_owner[gi];
            let (f, p) = arr_owner[fi];
            compose.insert((gi, fi), arr_index[&(k.comp(g, f), p)]);
        }
    }
    let identity: Vec<usize> = obj_owner
        .iter()
        .map(|&(o, p)| arr_index[&(k.identity_of(o), p)])
        .collect();
    SEtaleCategory::validate(objects_space, arrows_space, src, tgt, compose, identity)
}
