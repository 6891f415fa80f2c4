//! Named example theories and algebras.  Tests, docs, and the shipped
//! corpus refer to these by name; everything here is small enough to
//! check exhaustively at the default bound.

use crate::doctrine::{ArityMap, Doctrine, Word};
use crate::fincat::{FinCategory, Mor};
use crate::ids::{ElemId, MorId, ObjId};
use crate::kleisli::kleisli_unit;
use crate::theory::{
    clone_of_algebra, single_sort, FiniteAlgebra, Multicategory, OpTable, Structure,
};
use itertools::Itertools;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The initial normal theory on a sort category: the carrier is the
/// graded unit itself, substitution is composition of arity maps.
pub fn initial_theory(cat: Arc<FinCategory>, d: Doctrine, bound: usize) -> Multicategory {
    let units = kleisli_unit(cat.clone(), d, bound);
    let carrier = units.graded.clone();
    Multicategory::from_tables(
        carrier,
        |_w, _a, u| ElemId::new(u.name()),
        |w, a, t| {
            let x = units.arity(&t.mid, a, &t.x);
            let mut glue = ArityMap::identity(d, Word::empty(), &cat);
            for (b, y) in t.blocks.iter().zip(&t.ys) {
                let slot = &t.mid.letters()[glue.target.len()];
                glue = glue.juxtapose(units.arity(b, slot, y));
            }
            let flat = glue.source.clone();
            let psi = ArityMap::pure(d, w.clone(), flat, t.psi.clone(), &cat)
                .expect("tuple matchings are pure arity maps");
            let total = x.compose(&glue.compose(&psi, &cat), &cat);
            Some(ElemId::new(total.name()))
        },
        true,
    )
    .expect("unit carrier composes within any bound")
}

/// Initial single-sorted theory: identities only for planar and
/// symmetric, the projections (initial clone) for cartesian.
pub fn initial_operad(d: Doctrine, bound: usize) -> Multicategory {
    let (cat, _) = single_sort();
    initial_theory(cat, d, bound)
}

/// Terminal single-sorted theory: one element in every arity.
pub fn terminal_operad(d: Doctrine, bound: usize) -> Multicategory {
    let (cat, x) = single_sort();
    let star = ElemId::new("*");
    let cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = (0..=bound)
        .map(|n| {
            let w = Word::new(vec![x.clone(); n]);
            ((w, x.clone()), vec![star.clone()])
        })
        .collect();
    let carrier = crate::kleisli::GradedProfunctor::from_actions(
        d,
        cat.clone(),
        cat,
        bound,
        cells,
        |_h, _a, e| e.clone(),
        |_w, _alpha, e| e.clone(),
    )
    .expect("one element per word is a graded profunctor");
    Multicategory::from_tables(
        carrier,
        |_w, _a, _u| star.clone(),
        |_w, _a, _t| Some(star.clone()),
        true,
    )
    .expect("terminal tables compose")
}

/// The associative operad: terminal in the planar doctrine.
pub fn as_operad(bound: usize) -> Multicategory {
    terminal_operad(Doctrine::Planar, bound)
}

/// The commutative operad: terminal in the symmetric doctrine.
pub fn comm_operad(bound: usize) -> Multicategory {
    terminal_operad(Doctrine::Symmetric, bound)
}

fn order_id(order: &[usize]) -> ElemId {
    let digits: String = order.iter().map(|p| (p + 1).to_string()).collect();
    ElemId::new(format!("p{digits}"))
}

fn parse_order(e: &ElemId) -> Vec<usize> {
    e.as_str()
        .strip_prefix('p')
        .expect("permutation ids start with p")
        .chars()
        .map(|c| c.to_digit(10).expect("digit") as usize - 1)
        .collect()
}

/// The symmetric operad of monoids: `n!` elements in arity `n`, read as
/// input orders, substitution by block composition.
pub fn ass_operad(bound: usize) -> Multicategory {
    assert!(bound <= 9, "permutation ids use single digits");
    let (cat, x) = single_sort();
    let cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = (0..=bound)
        .map(|n| {
            let w = Word::new(vec![x.clone(); n]);
            let elems = (0..n).permutations(n).map(|o| order_id(&o)).collect();
            ((w, x.clone()), elems)
        })
        .collect();
    let carrier = crate::kleisli::GradedProfunctor::from_actions(
        Doctrine::Symmetric,
        cat.clone(),
        cat,
        bound,
        cells,
        |h, _a, e| {
            let renamed: Vec<usize> = parse_order(e).iter().map(|&k| h.index[k]).collect();
            order_id(&renamed)
        },
        |_w, _alpha, e| e.clone(),
    )
    .expect("permutation tables are a graded profunctor");
    Multicategory::from_tables(
        carrier,
        |_w, _a, _u| order_id(&[0]),
        |_w, _a, t| {
            let outer = parse_order(&t.x);
            let mut offsets = Vec::with_capacity(t.blocks.len());
            let mut total = 0;
            for b in &t.blocks {
                offsets.push(total);
                total += b.len();
            }
            let mut order = Vec::with_capacity(total);
            for &b in &outer {
                for k in parse_order(&t.ys[b]) {
                    order.push(t.psi[offsets[b] + k]);
                }
            }
            Some(order_id(&order))
        },
        true,
    )
    .expect("block composition stays within the bound")
}

/// Binary meet on `{0, 1}`.
pub fn meet_table() -> OpTable {
    OpTable::new("meet", 2, vec![0, 0, 0, 1])
}

/// Binary exclusive or on `{0, 1}`.
pub fn xor_table() -> OpTable {
    OpTable::new("xor", 2, vec![0, 1, 1, 0])
}

/// The clone of the 2-element meet-semilattice: `2^n - 1` terms in
/// arity `n`.
pub fn semilattice_clone(bound: usize) -> Multicategory {
    clone_of_algebra(2, &[meet_table()], bound)
}

/// The clone of the group `Z/2`: `2^n` terms in arity `n`.  Not normal
/// — `x ⊕ x` is a second unary term.
pub fn z2_clone(bound: usize) -> Multicategory {
    clone_of_algebra(2, &[xor_table()], bound)
}

/// A discrete strict algebra from a finite monoid; symmetric structure
/// (identity swaps) requires commutativity.
pub fn discrete_monoid_algebra(
    d: Doctrine,
    elems: &[&str],
    unit: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> FiniteAlgebra {
    assert!(matches!(d, Doctrine::Planar | Doctrine::Symmetric));
    let objs: Vec<ObjId> = elems.iter().map(|e| ObjId::new(*e)).collect();
    let cat = Arc::new(FinCategory::discrete(objs.clone()));
    let mut tensor = BTreeMap::new();
    let mut tensor_mor = BTreeMap::new();
    let mut swap = BTreeMap::new();
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            let c = &objs[mul(i, j)];
            tensor.insert((a.clone(), b.clone()), c.clone());
            tensor_mor.insert(
                (cat.identity(a).clone(), cat.identity(b).clone()),
                cat.identity(c).clone(),
            );
            if d == Doctrine::Symmetric {
                assert_eq!(mul(i, j), mul(j, i), "symmetric algebras must commute");
                swap.insert((a.clone(), b.clone()), cat.identity(c).clone());
            }
        }
    }
    FiniteAlgebra {
        doctrine: d,
        cat,
        unit_obj: objs[unit].clone(),
        tensor,
        structure: Structure::Monoidal { tensor_mor, swap },
    }
}

/// The cyclic group `Z/n` as a discrete strict algebra.
pub fn cyclic_algebra(d: Doctrine, n: usize) -> FiniteAlgebra {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let elems: Vec<&str> = names.iter().map(String::as_str).collect();
    discrete_monoid_algebra(d, &elems, 0, |i, j| (i + j) % n)
}

/// The Klein four-group as a discrete strict algebra.
pub fn klein_algebra(d: Doctrine) -> FiniteAlgebra {
    discrete_monoid_algebra(d, &["e", "a", "b", "c"], 0, |i, j| i ^ j)
}

/// A noncommutative monoid (left-zero semigroup with unit adjoined);
/// planar only.
pub fn left_zero_algebra() -> FiniteAlgebra {
    discrete_monoid_algebra(Doctrine::Planar, &["e", "a", "b"], 0, |i, j| {
        if i == 0 {
            j
        } else {
            i
        }
    })
}

fn poset_arrow(a: &ObjId, b: &ObjId) -> MorId {
    MorId::new(format!("{a}<={b}"))
}

/// The thin category of a finite poset given by its `≤` table.
fn poset_category(objs: &[ObjId], leq: impl Fn(usize, usize) -> bool) -> FinCategory {
    let mut mors = Vec::new();
    let mut identity = Vec::new();
    let mut compose = Vec::new();
    for (i, a) in objs.iter().enumerate() {
        identity.push((a.clone(), poset_arrow(a, a)));
        for (j, b) in objs.iter().enumerate() {
            if !leq(i, j) {
                continue;
            }
            mors.push(Mor {
                id: poset_arrow(a, b),
                src: a.clone(),
                dst: b.clone(),
            });
            for (k, c) in objs.iter().enumerate() {
                if leq(j, k) {
                    compose.push(((poset_arrow(b, c), poset_arrow(a, b)), poset_arrow(a, c)));
                }
            }
        }
    }
    FinCategory::new(objs.to_vec(), mors, identity, compose)
        .expect("posets are categories")
}

/// A thin monoidal algebra: a finite poset with a monotone monoid on
/// elements.  Symmetric structure again requires commutativity.
pub fn poset_monoid_algebra(
    d: Doctrine,
    elems: &[&str],
    leq: impl Fn(usize, usize) -> bool,
    unit: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> FiniteAlgebra {
    assert!(matches!(d, Doctrine::Planar | Doctrine::Symmetric));
    let objs: Vec<ObjId> = elems.iter().map(|e| ObjId::new(*e)).collect();
    let cat = Arc::new(poset_category(&objs, &leq));
    let mut tensor = BTreeMap::new();
    let mut tensor_mor = BTreeMap::new();
    let mut swap = BTreeMap::new();
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            let c = mul(i, j);
            tensor.insert((a.clone(), b.clone()), objs[c].clone());
            if d == Doctrine::Symmetric {
                assert_eq!(c, mul(j, i), "symmetric algebras must commute");
                swap.insert((a.clone(), b.clone()), poset_arrow(&objs[c], &objs[c]));
            }
            for (i2, a2) in objs.iter().enumerate() {
                for (j2, b2) in objs.iter().enumerate() {
                    if leq(i, i2) && leq(j, j2) {
                        let c2 = mul(i2, j2);
                        assert!(leq(c, c2), "tensor must be monotone");
                        tensor_mor.insert(
                            (poset_arrow(a, a2), poset_arrow(b, b2)),
                            poset_arrow(&objs[c], &objs[c2]),
                        );
                    }
                }
            }
        }
    }
    FiniteAlgebra {
        doctrine: d,
        cat,
        unit_obj: objs[unit].clone(),
        tensor,
        structure: Structure::Monoidal { tensor_mor, swap },
    }
}

/// The chain `0 < 1 < … < n-1` with tensor `max`, unit `0`.
pub fn chain_max_algebra(d: Doctrine, n: usize) -> FiniteAlgebra {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let elems: Vec<&str> = names.iter().map(String::as_str).collect();
    poset_monoid_algebra(d, &elems, |i, j| i <= j, 0, |i, j| i.max(j))
}

/// The chain with truncated addition `min(i + j, n-1)`, unit `0`.
pub fn tropical_algebra(d: Doctrine, n: usize) -> FiniteAlgebra {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let elems: Vec<&str> = names.iter().map(String::as_str).collect();
    poset_monoid_algebra(d, &elems, |i, j| i <= j, 0, |i, j| (i + j).min(n - 1))
}

/// A finite meet-semilattice with top as a cartesian strict algebra.
pub fn semilattice_algebra(
    elems: &[&str],
    top: usize,
    meet: impl Fn(usize, usize) -> usize,
) -> FiniteAlgebra {
    let objs: Vec<ObjId> = elems.iter().map(|e| ObjId::new(*e)).collect();
    let leq = |i: usize, j: usize| meet(i, j) == i;
    let cat = Arc::new(poset_category(&objs, leq));
    let mut tensor = BTreeMap::new();
    let mut proj1 = BTreeMap::new();
    let mut proj2 = BTreeMap::new();
    let mut pair = BTreeMap::new();
    let mut bang = BTreeMap::new();
    for (i, a) in objs.iter().enumerate() {
        assert!(leq(i, top), "top must be the greatest element");
        bang.insert(a.clone(), poset_arrow(a, &objs[top]));
        for (j, b) in objs.iter().enumerate() {
            let m = meet(i, j);
            assert_eq!(m, meet(j, i), "meet must commute");
            tensor.insert((a.clone(), b.clone()), objs[m].clone());
            proj1.insert((a.clone(), b.clone()), poset_arrow(&objs[m], a));
            proj2.insert((a.clone(), b.clone()), poset_arrow(&objs[m], b));
            for (k, c) in objs.iter().enumerate() {
                if leq(k, i) && leq(k, j) {
                    assert!(leq(k, m), "meet must be the greatest lower bound");
                    pair.insert(
                        (poset_arrow(c, a), poset_arrow(c, b)),
                        poset_arrow(c, &objs[m]),
                    );
                }
            }
        }
    }
    FiniteAlgebra {
        doctrine: Doctrine::Cartesian,
        cat,
        unit_obj: objs[top].clone(),
        tensor,
        structure: Structure::Cartesian {
            proj1,
            proj2,
            pair,
            bang,
        },
    }
}

/// The chain semilattice `0 < 1 < … < n-1` under `min`.
pub fn chain_semilattice(n: usize) -> FiniteAlgebra {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let elems: Vec<&str> = names.iter().map(String::as_str).collect();
    semilattice_algebra(&elems, n - 1, |i, j| i.min(j))
}

/// The four-element diamond: bottom, two incomparable atoms, top.
pub fn diamond_semilattice() -> FiniteAlgebra {
    // 0 = bottom, 1 = a, 2 = b, 3 = top; meet via the bitmask reading.
    semilattice_algebra(&["bot", "a", "b", "top"], 3, |i, j| i & j)
}

/// The pentagon `N5`: 0 < a < 1 and 0 < b < c < 1, `a` incomparable to
/// `b` and `c`.
pub fn pentagon_semilattice() -> FiniteAlgebra {
    let below: [&[usize]; 5] = [&[0], &[0, 1], &[0, 2], &[0, 2, 3], &[0, 1, 2, 3, 4]];
    semilattice_algebra(&["0", "a", "b", "c", "1"], 4, move |i, j| {
        *below[i]
            .iter()
            .filter(|x| below[j].contains(x))
            .max()
            .expect("0 is below everything")
    })
}

/// At least five valid strict algebras per doctrine.
pub fn standard_algebras(d: Doctrine) -> Vec<FiniteAlgebra> {
    match d {
        Doctrine::Planar => vec![
            cyclic_algebra(d, 2),
            cyclic_algebra(d, 3),
            cyclic_algebra(d, 4),
            left_zero_algebra(),
            chain_max_algebra(d, 2),
            tropical_algebra(d, 3),
        ],
        Doctrine::Symmetric => vec![
            cyclic_algebra(d, 2),
            cyclic_algebra(d, 3),
            cyclic_algebra(d, 4),
            klein_algebra(d),
            chain_max_algebra(d, 2),
            tropical_algebra(d, 3),
        ],
        Doctrine::Cartesian => vec![
            chain_semilattice(2),
            chain_semilattice(3),
            chain_semilattice(4),
            diamond_semilattice(),
            pentagon_semilattice(),
        ],
    }
}
