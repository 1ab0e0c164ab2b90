//! Shared desk-scale fixtures: spaces, categories, bicategories, linear
//! orders. Used by the test suites and handy from the CLI examples.

use std::collections::{BTreeMap, BTreeSet};

use crate::bicategory::{FinBicategory, RawBicategory};
use crate::category::{order_from_cover, FinCategory, LinearOrder};
use crate::finspace::FinSpace;

pub fn point_space() -> FinSpace {
    FinSpace::point()
}

pub fn sierpinski() -> FinSpace {
    FinSpace::validate(
        &["0".to_string(), "1".to_string()],
        &[("0".to_string(), "1".to_string())],
    )
    .expect("sierpinski")
}

/// A specialization chain `p0 ⊑ p1 ⊑ … ⊑ p_{k-1}`.
pub fn chain_space(k: usize) -> FinSpace {
    let points: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..k.saturating_sub(1) {
        pairs.push((format!("p{i}"), format!("p{}", i + 1)));
    }
    FinSpace::validate(&points, &pairs).expect("chain space")
}

pub fn discrete_space(k: usize) -> FinSpace {
    let points: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
    FinSpace::discrete(&points).expect("discrete space")
}

// ---------------------------------------------------------------------------
// Categories
// ---------------------------------------------------------------------------

pub fn terminal_category() -> FinCategory {
    FinCategory::ordinal(0)
}

/// The poset `0 < 1` as a category.
pub fn arrow_category() -> FinCategory {
    FinCategory::ordinal(1)
}

pub fn cyclic_group_category(m: usize) -> FinCategory {
    let elements: Vec<String> = (0..m).map(|i| format!("g{i}")).collect();
    let mul: Vec<Vec<usize>> =
        (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
    FinCategory::one_object_group(&elements, &mul)
}

pub fn z2_category() -> FinCategory {
    cyclic_group_category(2)
}

pub fn chaotic2_category() -> FinCategory {
    FinCategory::chaotic(&["x".to_string(), "y".to_string()])
}

/// Two objects with a parallel pair of arrows between them.
pub fn parallel_pair_category() -> FinCategory {
    FinCategory::validate(
        vec!["a".into(), "b".into()],
        vec![
            ("ida".into(), "a".into(), "a".into()),
            ("idb".into(), "b".into(), "b".into()),
            ("u".into(), "a".into(), "b".into()),
            ("v".into(), "a".into(), "b".into()),
        ],
        vec![
            ("ida".into(), "ida".into(), "ida".into()),
            ("idb".into(), "idb".into(), "idb".into()),
            ("u".into(), "ida".into(), "u".into()),
            ("v".into(), "ida".into(), "v".into()),
            ("idb".into(), "u".into(), "u".into()),
            ("idb".into(), "v".into(), "v".into()),
        ],
        vec![("a".into(), "ida".into()), ("b".into(), "idb".into())],
    )
    .expect("parallel pair category")
}

/// The four category fixtures used throughout.
pub fn category_fixtures() -> Vec<(&'static str, FinCategory)> {
    vec![
        ("arrow", arrow_category()),
        ("z2", z2_category()),
        ("chaotic2", chaotic2_category()),
        ("parallel_pair", parallel_pair_category()),
    ]
}

// ---------------------------------------------------------------------------
// Bicategories
// ---------------------------------------------------------------------------

/// One object, one 1-cell, 2-cells the cyclic group of order `m` under
/// both compositions; all constraint cells trivial.
pub fn sigma2_cyclic(m: usize) -> FinBicategory {
    assert!(m >= 1);
    let two: Vec<String> = (0..m).map(|i| format!("t{i}")).collect();
    let mut raw = RawBicategory {
        objects: vec!["*".into()],
        one_cells: vec![("1".into(), "*".into(), "*".into())],
        two_cells: two.iter().map(|t| (t.clone(), "1".into(), "1".into())).collect(),
        id_one: BTreeMap::from([("*".into(), "1".into())]),
        id_two: BTreeMap::from([("1".into(), "t0".into())]),
        vcomp: Vec::new(),
        hcomp_one: vec![("1".into(), "1".into(), "1".into())],
        hcomp_two: Vec::new(),
        associator: vec![("1".into(), "1".into(), "1".into(), "t0".into())],
        lunitor: BTreeMap::from([("1".into(), "t0".into())]),
        runitor: BTreeMap::from([("1".into(), "t0".into())]),
    };
    for a in 0..m {
        for b in 0..m {
            let sum = two[(a + b) % m].clone();
            raw.vcomp.push((two[a].clone(), two[b].clone(), sum.clone()));
            raw.hcomp_two.push((two[a].clone(), two[b].clone(), sum));
        }
    }
    FinBicategory::validate(&raw).expect("sigma2 cyclic is a bicategory")
}

pub fn terminal_bicategory() -> FinBicategory {
    sigma2_cyclic(1)
}

/// Two objects; on `A` the one-object bicategory with 1-cells the group of
/// order two and a nontrivial associator cocycle, on `B` only identities.
/// The associator component at `(g, g, g)` is the nonidentity 2-cell, so
/// the orientation of the coherence equation is observable.
pub fn nonstrict_two_object() -> FinBicategory {
    let x = |c: char, v: usize| format!("{c}{v}");
    let mut raw = RawBicategory {
        objects: vec!["A".into(), "B".into()],
        one_cells: vec![
            ("e".into(), "A".into(), "A".into()),
            ("g".into(), "A".into(), "A".into()),
            ("1B".into(), "B".into(), "B".into()),
        ],
        two_cells: vec![
            (x('e', 0), "e".into(), "e".into()),
            (x('e', 1), "e".into(), "e".into()),
            (x('g', 0), "g".into(), "g".into()),
            (x('g', 1), "g".into(), "g".into()),
            ("b0".into(), "1B".into(), "1B".into()),
        ],
        id_one: BTreeMap::from([("A".into(), "e".into()), ("B".into(), "1B".into())]),
        id_two: BTreeMap::from([
            ("e".into(), x('e', 0)),
            ("g".into(), x('g', 0)),
            ("1B".into(), "b0".into()),
        ]),
        vcomp: Vec::new(),
        hcomp_one: vec![
            ("e".into(), "e".into(), "e".into()),
            ("e".into(), "g".into(), "g".into()),
            ("g".into(), "e".into(), "g".into()),
            ("g".into(), "g".into(), "e".into()),
            ("1B".into(), "1B".into(), "1B".into()),
        ],
        hcomp_two: Vec::new(),
        associator: Vec::new(),
        lunitor: BTreeMap::from([
            ("e".into(), x('e', 0)),
            ("g".into(), x('g', 0)),
            ("1B".into(), "b0".into()),
        ]),
        runitor: BTreeMap::from([
            ("e".into(), x('e', 0)),
            ("g".into(), x('g', 0)),
            ("1B".into(), "b0".into()),
        ]),
    };
    // Vertical and horizontal composition on the A-component: grading in
    // the group of order two on both axes.
    let cells = ['e', 'g'];
    for ca in cells {
        for a in 0..2 {
            for b in 0..2 {
                raw.vcomp.push((x(ca, a), x(ca, b), x(ca, (a + b) % 2)));
            }
        }
    }
    raw.vcomp.push(("b0".into(), "b0".into(), "b0".into()));
    for ca in cells {
        for cb in cells {
            let prod = if ca == cb { 'e' } else { 'g' };
            for a in 0..2 {
                for b in 0..2 {
                    raw.hcomp_two.push((x(ca, a), x(cb, b), x(prod, (a + b) % 2)));
                }
            }
        }
    }
    raw.hcomp_two.push(("b0".into(), "b0".into(), "b0".into()));
    // Associator: the normalized 3-cocycle that is nontrivial exactly on
    // (g, g, g).
    for ca in cells {
        for cb in cells {
            for cc in cells {
                let triple_product = match (ca, cb, cc) {
                    ('e', 'e', 'e') => 'e',
                    ('e', 'e', 'g') | ('e', 'g', 'e') | ('g', 'e', 'e') => 'g',
                    ('e', 'g', 'g') | ('g', 'e', 'g') | ('g', 'g', 'e') => 'e',
                    _ => 'g',
                };
                let twist = usize::from(ca == 'g' && cb == 'g' && cc == 'g');
                raw.associator.push((
                    ca.to_string(),
                    cb.to_string(),
                    cc.to_string(),
                    x(triple_product, twist),
                ));
            }
        }
    }
    raw.associator.push(("1B".into(), "1B".into(), "1B".into(), "b0".into()));
    FinBicategory::validate(&raw).expect("nonstrict two-object fixture is a bicategory")
}

/// Every bicategory fixture of the corpus, named.
pub fn bicategory_fixtures() -> Vec<(&'static str, FinBicategory)> {
    let mut out = vec![
        ("terminal", terminal_bicategory()),
        ("sigma2_z2", sigma2_cyclic(2)),
        ("sigma2_z3", sigma2_cyclic(3)),
        ("nonstrict", nonstrict_two_object()),
    ];
    for (name, c) in category_fixtures() {
        let fixture: &'static str = match name {
            "arrow" => "disc_arrow",
            "z2" => "disc_z2",
            "chaotic2" => "disc_chaotic2",
            _ => "disc_parallel_pair",
        };
        out.push((fixture, FinBicategory::locally_discrete(&c)));
    }
    out
}

// ---------------------------------------------------------------------------
// Linear orders
// ---------------------------------------------------------------------------

fn total_index(k: usize) -> FinSpace {
    let points: Vec<String> = (1..=k).map(|i| format!("i{i}")).collect();
    let mut pairs = Vec::new();
    for i in 1..k {
        pairs.push((format!("i{i}"), format!("i{}", i + 1)));
    }
    FinSpace::validate(&points, &pairs).expect("total index poset")
}

/// The order over a point whose stalk is a `k`-chain: the cover of the
/// point by `k` copies of itself along a total index.
pub fn chain_order_over_point(k: usize) -> LinearOrder {
    let base = point_space();
    let index = total_index(k);
    let sets: BTreeMap<String, BTreeSet<String>> = (1..=k)
        .map(|i| (format!("i{i}"), BTreeSet::from(["*".to_string()])))
        .collect();
    order_from_cover(&base, &index, &sets).expect("chain order over point")
}

/// The ordered cover of the Sierpiński space by `U₁ = {0,1} ⊇ U₂ = {1}`:
/// stalks of sizes 1 and 2.
pub fn sierpinski_cover_order() -> LinearOrder {
    let base = sierpinski();
    let index = total_index(2);
    let sets = BTreeMap::from([
        ("i1".to_string(), BTreeSet::from(["0".to_string(), "1".to_string()])),
        ("i2".to_string(), BTreeSet::from(["1".to_string()])),
    ]);
    order_from_cover(&base, &index, &sets).expect("sierpinski cover order")
}

/// Over the 3-point chain: nested opens of sizes 3 ⊇ 2 ⊇ 1; stalk sizes
/// 1, 2, 3.
pub fn chain3_cover_order() -> LinearOrder {
    let base = chain_space(3);
    let index = total_index(3);
    let sets = BTreeMap::from([
        (
            "i1".to_string(),
            BTreeSet::from(["p0".to_string(), "p1".to_string(), "p2".to_string()]),
        ),
        ("i2".to_string(), BTreeSet::from(["p1".to_string(), "p2".to_string()])),
        ("i3".to_string(), BTreeSet::from(["p2".to_string()])),
    ]);
    order_from_cover(&base, &index, &sets).expect("chain3 cover order")
}

/// Over the discrete 2-point space, with a vee-shaped index that is total
/// only locally: `U₁ = {q0}`, `U₂ = {q1}`, `U₃ = {q0,q1}` with `1 < 3`,
/// `2 < 3`. Stalks of size 2.
pub fn vee_cover_order() -> LinearOrder {
    let base = discrete_space(2);
    let index = FinSpace::validate(
        &["i1".to_string(), "i2".to_string(), "i3".to_string()],
        &[
            ("i1".to_string(), "i3".to_string()),
            ("i2".to_string(), "i3".to_string()),
        ],
    )
    .expect("vee index");
    let sets = BTreeMap::from([
        ("i1".to_string(), BTreeSet::from(["q0".to_string()])),
        ("i2".to_string(), BTreeSet::from(["q1".to_string()])),
        (
            "i3".to_string(),
            BTreeSet::from(["q0".to_string(), "q1".to_string()]),
        ),
    ]);
    order_from_cover(&base, &index, &sets).expect("vee cover order")
}

/// The linear-order corpus: stalks of size ≤ 4 over spaces with ≤ 3
/// points.
pub fn order_fixtures() -> Vec<(&'static str, LinearOrder)> {
    vec![
        ("trivial_point", LinearOrder::trivial(&point_space())),
        ("chain2_point", chain_order_over_point(2)),
        ("chain3_point", chain_order_over_point(3)),
        ("chain4_point", chain_order_over_point(4)),
        ("sierpinski_cover", sierpinski_cover_order()),
        ("chain3_space_cover", chain3_cover_order()),
        ("vee_cover", vee_cover_order()),
    ]
}
