//! The Lack-Paoli 2-nerve (Cat-valued and bisimplicial) and the
//! four-condition characterization of 2-nerves of bicategories.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{enumerate_normal_homs, FinBicategory};
use crate::simplicial::{
    arrow_token, coface, codegeneracy, segal_functor_report, ArrowData, CatCoskUnit, CatOp,
    CatSSet, LaxIconLevel, LevelCategory, SimplicialError, TruncBiSSet,
};

/// The 2-nerve: level `n` has the normal homomorphisms `[n] → B` as
/// objects and icons as arrows; operators act by reindexing.
pub fn lp_2nerve(b: &FinBicategory, maxdim: usize) -> CatSSet {
    assert!(maxdim >= 1);
    let shared = Arc::new(b.clone());
    let mut levels = Vec::new();
    for n in 0..=maxdim {
        levels.push(LevelCategory::LaxIcons(LaxIconLevel::new(
            shared.clone(),
            n,
            enumerate_normal_homs(b, n),
        )));
    }
    let mut faces = vec![Vec::new(); maxdim + 1];
    let mut degens = vec![Vec::new(); maxdim + 1];
    for n in 1..=maxdim {
        for i in 0..=n {
            faces[n].push(CatOp::Reindex(coface(n, i)));
        }
    }
    for n in 0..maxdim {
        for i in 0..=n {
            degens[n].push(CatOp::Reindex(codegeneracy(n, i)));
        }
    }
    CatSSet::new(maxdim, levels, faces, degens)
}

/// A path of `m` composable arrows, the `(n,m)` cell of the bisimplicial
/// nerve; `m = 0` paths are bare objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Path {
    start: usize,
    arrows: Vec<ArrowData>,
}

fn path_id(level: &LevelCategory, p: &Path) -> String {
    if p.arrows.is_empty() {
        return format!("o{}", p.start);
    }
    let parts: Vec<String> = p.arrows.iter().map(|a| arrow_token(level, a)).collect();
    parts.join("&")
}

/// Applies the Grothendieck nerve to each level of the 2-nerve: the
/// vertical axis is the nerve of the level category, the horizontal axis
/// is inherited. Levels must stay materializable.
pub fn lp_bisimplicial(b: &FinBicategory, maxdim: usize) -> Result<TruncBiSSet, SimplicialError> {
    const CAP: usize = 200_000;
    let x = lp_2nerve(b, maxdim);
    // Materialize paths per (n, m).
    let mut paths: Vec<Vec<Vec<Path>>> = Vec::new();
    for n in 0..=maxdim {
        let level = x.level(n);
        let arrows = level.arrows_materialized(CAP).ok_or_else(|| {
            SimplicialError::Malformed(format!(
                "2-nerve level {n} has too many icons to tabulate"
            ))
        })?;
        let mut by_m: Vec<Vec<Path>> = Vec::new();
        let objects: Vec<Path> =
            (0..level.object_count()).map(|o| Path { start: o, arrows: vec![] }).collect();
        by_m.push(objects);
        for m in 1..=maxdim {
            let mut next: Vec<Path> = Vec::new();
            for p in &by_m[m - 1] {
                let end = if p.arrows.is_empty() {
                    p.start
                } else {
                    level.tgt(p.arrows.last().unwrap())
                };
                for a in &arrows {
                    if level.src(a) == end {
                        let mut q = p.clone();
                        q.arrows.push(a.clone());
                        next.push(q);
                    }
                }
                if next.len() > CAP {
                    return Err(SimplicialError::Malformed(format!(
                        "2-nerve level ({n},{m}) has too many cells to tabulate"
                    )));
                }
            }
            by_m.push(next);
        }
        paths.push(by_m);
    }
    // Index maps id → path.
    let mut lookup: Vec<Vec<BTreeMap<String, Path>>> = Vec::new();
    let mut levels: Vec<Vec<Vec<String>>> = Vec::new();
    for n in 0..=maxdim {
        let mut row_ids = Vec::new();
        let mut row_lookup = Vec::new();
        for m in 0..=maxdim {
            let map: BTreeMap<String, Path> = paths[n][m]
                .iter()
                .map(|p| (path_id(x.level(n), p), p.clone()))
                .collect();
            row_ids.push(map.keys().cloned().collect::<Vec<String>>());
            row_lookup.push(map);
        }
        levels.push(row_ids);
        lookup.push(row_lookup);
    }

    let path_end = |n: usize, p: &Path| -> usize {
        if p.arrows.is_empty() {
            p.start
        } else {
            x.level(n).tgt(p.arrows.last().unwrap())
        }
    };

    let h_apply = |n: usize, m: usize, i: usize, id: &str, down: bool| -> String {
        let p = &lookup[n][m][id];
        let target = if down { n - 1 } else { n + 1 };
        let q = if p.arrows.is_empty() {
            let o = if down { x.face_obj(n, i, p.start) } else { x.degen_obj(n, i, p.start) };
            Path { start: o, arrows: vec![] }
        } else {
            let arrows: Vec<ArrowData> = p
                .arrows
                .iter()
                .map(|a| if down { x.face_arr(n, i, a) } else { x.degen_arr(n, i, a) })
                .collect();
            let start = x.level(target).src(&arrows[0]);
            Path { start, arrows }
        };
        path_id(x.level(target), &q)
    };

    let v_face = |n: usize, m: usize, i: usize, id: &str| -> String {
        let p = &lookup[n][m][id];
        let level = x.level(n);
        let q = if m == 1 {
            let o = if i == 0 { path_end(n, p) } else { p.start };
            Path { start: o, arrows: vec![] }
        } else if i == 0 {
            Path { start: level.tgt(&p.arrows[0]), arrows: p.arrows[1..].to_vec() }
        } else if i == m {
            Path { start: p.start, arrows: p.arrows[..m - 1].to_vec() }
        } else {
            let mut arrows = Vec::with_capacity(m - 1);
            arrows.extend_from_slice(&p.arrows[..i - 1]);
            arrows.push(level.compose(&p.arrows[i], &p.arrows[i - 1]));
            arrows.extend_from_slice(&p.arrows[i + 1..]);
            Path { start: p.start, arrows }
        };
        path_id(level, &q)
    };

    let v_degen = |n: usize, m: usize, i: usize, id: &str| -> String {
        let p = &lookup[n][m][id];
        let level = x.level(n);
        let anchor = if i == 0 {
            p.start
        } else {
            level.tgt(&p.arrows[i - 1])
        };
        let mut arrows = p.arrows.clone();
        arrows.insert(i, level.identity(anchor));
        path_id(level, &Path { start: p.start, arrows })
    };

    TruncBiSSet::build(
        maxdim,
        maxdim,
        levels.clone(),
        |n, m, i, id| h_apply(n, m, i, id, true),
        |n, m, i, id| h_apply(n, m, i, id, false),
        v_face,
        v_degen,
    )
}

/// Outcome of one condition of the characterization theorem.
#[derive(Debug, Clone)]
pub struct LpConditionReport {
    pub pass: bool,
    pub detail: String,
}

/// Outcome of the four conditions: (i) 3-coskeletal in range, (ii) level 0
/// discrete, (iii) Segal functors are equivalences, (iv) the units c₂ and
/// c₃ are discrete isofibrations.
#[derive(Debug, Clone)]
pub struct LpReport {
    pub coskeletal3: LpConditionReport,
    pub discrete0: LpConditionReport,
    pub segal_equivalences: LpConditionReport,
    pub unit_isofibrations: LpConditionReport,
}

impl LpReport {
    pub fn all_pass(&self) -> bool {
        self.coskeletal3.pass
            && self.discrete0.pass
            && self.segal_equivalences.pass
            && self.unit_isofibrations.pass
    }
}

/// Checks the four necessary-and-sufficient conditions for a Cat-valued
/// simplicial object to be a 2-nerve, on the available truncation.
pub fn check_lp_characterization(x: &CatSSet) -> Result<LpReport, SimplicialError> {
    if x.maxdim() < 4 {
        return Err(SimplicialError::TruncationTooShallow { needed: 4, have: x.maxdim() });
    }
    // (i): a simplicial object is 3-coskeletal iff every unit
    // X_n → Cosk_{n-1}(X)_n with n ≥ 4 is an isomorphism.
    let mut coskeletal3 = LpConditionReport { pass: true, detail: "c_n iso for 4 ≤ n".into() };
    for n in 4..=x.maxdim() {
        let unit = CatCoskUnit::new(x, n)?;
        if !unit.unit_is_iso().map_err(SimplicialError::Malformed)? {
            coskeletal3 = LpConditionReport {
                pass: false,
                detail: format!("c_{n} is not an isomorphism of categories"),
            };
            break;
        }
    }
    let discrete0 = if x.level(0).is_discrete() {
        LpConditionReport { pass: true, detail: "level 0 is discrete".into() }
    } else {
        LpConditionReport { pass: false, detail: "level 0 has a non-identity arrow".into() }
    };
    let mut segal_equivalences =
        LpConditionReport { pass: true, detail: "Segal functors are equivalences".into() };
    for n in 2..=x.maxdim() {
        let r = segal_functor_report(x, n)?;
        if !r.is_equivalence() {
            segal_equivalences = LpConditionReport {
                pass: false,
                detail: r
                    .witness
                    .unwrap_or_else(|| format!("S_{n} is not an equivalence")),
            };
            break;
        }
    }
    let mut unit_isofibrations =
        LpConditionReport { pass: true, detail: "c_2 and c_3 are discrete isofibrations".into() };
    for n in [2usize, 3] {
        let unit = CatCoskUnit::new(x, n)?;
        if !unit.unit_is_discrete_isofibration().map_err(SimplicialError::Malformed)? {
            unit_isofibrations = LpConditionReport {
                pass: false,
                detail: format!("c_{n} is not a discrete isofibration"),
            };
            break;
        }
    }
    Ok(LpReport { coskeletal3, discrete0, segal_equivalences, unit_isofibrations })
}
