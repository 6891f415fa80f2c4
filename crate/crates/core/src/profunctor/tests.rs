use super::*;
use crate::fincat::{FinCategory, Functor, Mor};
use crate::ids::{ElemId, MorId, ObjId};
use std::collections::BTreeMap;
use std::sync::Arc;

fn o(s: &str) -> ObjId {
    ObjId::new(s)
}
fn m(s: &str) -> MorId {
    MorId::new(s)
}
fn e(s: &str) -> ElemId {
    ElemId::new(s)
}

fn two_chain() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::new(
            [o("a"), o("b")],
            [
                Mor { id: m("id_a"), src: o("a"), dst: o("a") },
                Mor { id: m("id_b"), src: o("b"), dst: o("b") },
                Mor { id: m("f"), src: o("a"), dst: o("b") },
            ],
            [(o("a"), m("id_a")), (o("b"), m("id_b"))],
            [
                ((m("id_a"), m("id_a")), m("id_a")),
                ((m("id_b"), m("id_b")), m("id_b")),
                ((m("f"), m("id_a")), m("f")),
                ((m("id_b"), m("f")), m("f")),
            ],
        )
        .unwrap(),
    )
}

fn terminal() -> Arc<FinCategory> {
    Arc::new(FinCategory::discrete([o("*")]))
}

/// Fully independent closure count: enumerate triples, saturate the
/// one-step zigzag relation by sweeping, count orbits.  No union-find.
fn closure_class_count(outer: &Profunctor, inner: &Profunctor, c: &ObjId, a: &ObjId) -> usize {
    let middle = outer.source.clone();
    let mut nodes: Vec<(ObjId, ElemId, ElemId)> = Vec::new();
    for b in middle.objects() {
        for y in outer.elems(c, b) {
            for x in inner.elems(b, a) {
                nodes.push((b.clone(), y.clone(), x.clone()));
            }
        }
    }
    let index: BTreeMap<&(ObjId, ElemId, ElemId), usize> =
        nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for beta in middle.morphisms() {
        for y in outer.elems(c, &beta.src) {
            for x in inner.elems(&beta.dst, a) {
                let u = (beta.dst.clone(), outer.right(c, &beta.id, y).clone(), x.clone());
                let v = (beta.src.clone(), y.clone(), inner.left(&beta.id, a, x).clone());
                edges.push((index[&u], index[&v]));
            }
        }
    }
    // Label propagation until fixpoint.
    let mut label: Vec<usize> = (0..nodes.len()).collect();
    loop {
        let mut changed = false;
        for &(u, v) in &edges {
            let min = label[u].min(label[v]);
            if label[u] != min || label[v] != min {
                label[u] = min;
                label[v] = min;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut roots: Vec<usize> = (0..nodes.len())
        .map(|i| {
            let mut j = i;
            while label[j] != j {
                j = label[j];
            }
            j
        })
        .collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

/// A nontrivial lawful profunctor 2-chain ⇸ 2-chain with 2 elements in one
/// cell.  left/right actions defined by a table small enough to hand-check.
fn sample_prof() -> Profunctor {
    let c = two_chain();
    // cells: (a,a): {p}, (a,b): {q,r}, (b,b): {s}; (b,a) empty.
    // left action along f: a->b on (b,*) cells into (a,*);
    // right action along f on (*,a) cells into (*,b).
    let mut cells = BTreeMap::new();
    cells.insert((o("a"), o("a")), vec![e("p")]);
    cells.insert((o("a"), o("b")), vec![e("q"), e("r")]);
    cells.insert((o("b"), o("b")), vec![e("s")]);
    Profunctor::from_actions(
        c.clone(),
        c.clone(),
        cells,
        |beta, a, x| {
            if beta.as_str() == "f" && a.as_str() == "b" {
                // M(b,b) -> M(a,b): s ↦ q
                assert_eq!(x.as_str(), "s");
                e("q")
            } else {
                x.clone()
            }
        },
        |b, alpha, x| {
            if alpha.as_str() == "f" && b.as_str() == "a" {
                // M(a,a) -> M(a,b): p ↦ q
                assert_eq!(x.as_str(), "p");
                e("q")
            } else {
                x.clone()
            }
        },
    )
    .unwrap()
}

#[test]
fn sample_profunctor_is_lawful() {
    assert!(sample_prof().is_lawful());
}

#[test]
fn identity_prof_counts_and_laws() {
    let hom = identity_prof(two_chain());
    assert!(hom.is_lawful());
    assert_eq!(hom.total_elements(), 3);
    assert_eq!(hom.elems(&o("a"), &o("b")), &[e("f")]);
    assert!(hom.elems(&o("b"), &o("a")).is_empty());

    let pt = identity_prof(terminal());
    assert_eq!(pt.total_elements(), 1);
}

#[test]
fn broken_action_law_is_reported() {
    let c = two_chain();
    let mut cells = BTreeMap::new();
    cells.insert((o("a"), o("a")), vec![e("x"), e("y")]);
    cells.insert((o("a"), o("b")), vec![e("z")]);
    // The left action along id_a swaps x and y: identity law broken.
    let p = Profunctor::from_actions(
        c.clone(),
        c,
        cells,
        |beta, _, x| match (beta.as_str(), x.as_str()) {
            ("id_a", "x") => e("y"),
            ("id_a", "y") => e("x"),
            _ => x.clone(),
        },
        |_, alpha, x| if alpha.as_str() == "f" { e("z") } else { x.clone() },
    )
    .unwrap();
    assert!(p
        .validate()
        .iter()
        .any(|v| matches!(v, ProfViolation::IdentityAction { .. })));
}

#[test]
fn compose_unit_laws_give_inverse_bijections() {
    let p = sample_prof();
    let hom = identity_prof(p.target.clone());
    let left = compose_prof(&hom, &p).unwrap();
    let (to, from) = left_unit_cells(&left);
    assert!(to.is_lawful(), "{:?}", to.check());
    assert!(from.is_lawful());
    assert!(to.is_inverse_of(&from));

    let hom_a = identity_prof(p.source.clone());
    let right = compose_prof(&p, &hom_a).unwrap();
    let (to, from) = right_unit_cells(&right);
    assert!(to.is_lawful());
    assert!(from.is_lawful());
    assert!(to.is_inverse_of(&from));
}

#[test]
fn discrete_middle_composite_is_sum_of_products() {
    let d = Arc::new(FinCategory::discrete([o("u"), o("v")]));
    let t = terminal();
    let mut cells_n = BTreeMap::new();
    cells_n.insert((o("*"), o("u")), vec![e("n1"), e("n2")]);
    cells_n.insert((o("*"), o("v")), vec![e("n3")]);
    let n = Profunctor::from_actions(d.clone(), t.clone(), cells_n, |_, _, x| x.clone(), |_, _, x| {
        x.clone()
    })
    .unwrap();
    let mut cells_m = BTreeMap::new();
    cells_m.insert((o("u"), o("*")), vec![e("m1"), e("m2"), e("m3")]);
    cells_m.insert((o("v"), o("*")), vec![e("m4")]);
    let m_ = Profunctor::from_actions(t.clone(), d, cells_m, |_, _, x| x.clone(), |_, _, x| {
        x.clone()
    })
    .unwrap();
    let comp = compose_prof(&n, &m_).unwrap();
    // 2·3 + 1·1 = 7 pairs, no identifications over a discrete middle.
    assert_eq!(comp.prof.total_elements(), 7);
    assert_eq!(
        closure_class_count(&n, &m_, &o("*"), &o("*")),
        comp.prof.elems(&o("*"), &o("*")).len()
    );
}

#[test]
fn union_find_matches_independent_closure() {
    let p = sample_prof();
    let q = identity_prof(two_chain());
    for (outer, inner) in [(&p, &q), (&q, &p), (&p, &p)] {
        let comp = compose_prof(outer, inner).unwrap();
        for c in outer.target.objects() {
            for a in inner.source.objects() {
                assert_eq!(
                    comp.prof.elems(c, a).len(),
                    closure_class_count(outer, inner, c, a),
                    "cell ({c}, {a})"
                );
            }
        }
    }
}

#[test]
fn composite_is_lawful_profunctor() {
    let p = sample_prof();
    let comp = compose_prof(&p, &p).unwrap();
    assert!(comp.prof.is_lawful(), "{:?}", comp.prof.validate());
}

#[test]
fn assoc_cells_are_inverse_bijections() {
    let p = sample_prof();
    let pn = compose_prof(&p, &p).unwrap();
    let pn_m = compose_prof(&pn.prof, &p).unwrap();
    let nm = compose_prof(&p, &p).unwrap();
    let p_nm = compose_prof(&p, &nm.prof).unwrap();
    let (to_right, to_left) = assoc_cells(&pn, &pn_m, &nm, &p_nm);
    assert!(to_right.is_lawful(), "{:?}", to_right.check());
    assert!(to_left.is_lawful());
    assert!(to_right.is_inverse_of(&to_left));
}

#[test]
fn star_of_identity_is_identity_prof() {
    let c = two_chain();
    let f = Functor::identity(c.clone());
    assert_eq!(star(&f), identity_prof(c.clone()));
    assert_eq!(costar(&f), identity_prof(c));
}

#[test]
fn star_counts_for_collapse_functor() {
    let c = two_chain();
    let t = terminal();
    let f = Functor::new(
        c.clone(),
        t,
        [(o("a"), o("*")), (o("b"), o("*"))],
        [(m("id_a"), m("id_*")), (m("id_b"), m("id_*")), (m("f"), m("id_*"))],
    )
    .unwrap();
    assert!(f.check().is_empty());
    assert_eq!(star(&f).total_elements(), 2);
    assert_eq!(costar(&f).total_elements(), 2);
    assert!(check_adjunction(&f).is_empty());
}

#[test]
fn adjunction_holds_for_chain_embedding() {
    // Embed the discrete {a, b} into the 2-chain.
    let d = Arc::new(FinCategory::discrete([o("a"), o("b")]));
    let c = two_chain();
    let f = Functor::new(
        d,
        c,
        [(o("a"), o("a")), (o("b"), o("b"))],
        [(m("id_a"), m("id_a")), (m("id_b"), m("id_b"))],
    )
    .unwrap();
    assert!(check_adjunction(&f).is_empty());
}

#[test]
fn identity_monad_passes_and_recovers_base() {
    let c = two_chain();
    let hom = identity_prof(c.clone());
    let unit = ProfCell::identity(&hom);
    let comp = compose_prof(&hom, &hom).unwrap();
    let (mult, _) = left_unit_cells(&comp);
    assert!(check_prof_monad(&hom, &unit, &mult).is_empty());

    let (kc, k) = kleisli_object(&hom, &unit, &mult).unwrap();
    assert!(kc.validate().is_empty());
    assert_eq!(kc.objects(), c.objects());
    assert_eq!(kc.morphisms().len(), c.morphisms().len());
    assert!(k.check().is_empty());
}

#[test]
fn mutated_mult_is_detected() {
    // Z/2 as a one-object monad; redirect one multiplication entry.
    let op = |x: &ElemId, y: &ElemId| if x == y { e("g0") } else { e("g1") };
    let (m_, unit, good) = monoid_monad(vec![e("g0"), e("g1")], e("g0"), op);
    assert!(check_prof_monad(&m_, &unit, &good).is_empty());

    let mut bad = good.clone();
    let table = bad.components.get_mut(&(o("*"), o("*"))).unwrap();
    // Find the class of (g0, g0) (maps to g0) and point it at g1.
    let target = table
        .iter()
        .find(|(cls, v)| cls.as_str().contains("g0") && v.as_str() == "g0")
        .map(|(cls, _)| cls.clone())
        .unwrap();
    table.insert(target, e("g1"));
    let report = check_prof_monad(&m_, &unit, &bad);
    assert!(!report.is_empty());
    assert!(report.iter().any(|v| matches!(
        v,
        MonadViolation::LeftUnitLaw { .. }
            | MonadViolation::RightUnitLaw { .. }
            | MonadViolation::Associativity { .. }
    )));
}

#[test]
fn monoid_monad_gives_one_object_kleisli() {
    // Z/3 written multiplicatively: elements g0 (unit), g1, g2.
    let add = |x: &ElemId, y: &ElemId| {
        let i: u8 = x.as_str()[1..].parse().unwrap();
        let j: u8 = y.as_str()[1..].parse().unwrap();
        e(&format!("g{}", (i + j) % 3))
    };
    let (m_, unit, mult) = monoid_monad(vec![e("g0"), e("g1"), e("g2")], e("g0"), add);
    assert!(check_prof_monad(&m_, &unit, &mult).is_empty());
    let (kc, k) = kleisli_object(&m_, &unit, &mult).unwrap();
    assert!(kc.validate().is_empty());
    assert_eq!(kc.objects().len(), 1);
    assert_eq!(kc.morphisms().len(), 3);
    assert!(k.check().is_empty());
    // The composition table is the group table, read through morphism ids.
    let g1 = kc
        .morphisms()
        .iter()
        .find(|mor| mor.id.as_str().contains("g1"))
        .unwrap();
    let g2 = kc
        .morphisms()
        .iter()
        .find(|mor| mor.id.as_str().contains("g2"))
        .unwrap();
    let prod = kc.compose(&g1.id, &g2.id).unwrap();
    assert!(prod.as_str().contains("g0"));
}

#[test]
fn io_ff_factorization_properties() {
    let c = two_chain();
    let t = terminal();
    let collapse = Functor::new(
        c.clone(),
        t,
        [(o("a"), o("*")), (o("b"), o("*"))],
        [(m("id_a"), m("id_*")), (m("id_b"), m("id_*")), (m("f"), m("id_*"))],
    )
    .unwrap();
    let fact = io_ff_factorize(&collapse);
    assert!(fact.check(&collapse).is_empty(), "{:?}", fact.check(&collapse));
    // Collapsing the chain makes hom(b, a) appear in the middle category.
    assert_eq!(fact.middle.hom(&o("b"), &o("a")).len(), 1);

    let ident = Functor::identity(c);
    let fact = io_ff_factorize(&ident);
    assert!(fact.check(&ident).is_empty());
}

#[test]
fn elements_factorization_round_trip() {
    let p = sample_prof();
    let fact = elements_factorization(&p);
    assert!(fact.category.validate().is_empty());
    assert!(fact.p.check().is_empty());
    assert!(fact.q.check().is_empty());
    assert!(fact.to_composite.is_lawful(), "{:?}", fact.to_composite.check());
    assert!(fact.from_composite.is_lawful());
    assert!(fact.to_composite.is_inverse_of(&fact.from_composite));
}

#[test]
fn elements_factorization_degenerate_cases() {
    let t = terminal();
    let fact = elements_factorization(&identity_prof(t.clone()));
    assert_eq!(fact.category.objects().len(), 1);
    assert_eq!(fact.category.morphisms().len(), 1);

    let empty = Profunctor::from_actions(
        t.clone(),
        t,
        BTreeMap::new(),
        |_, _, x| x.clone(),
        |_, _, x| x.clone(),
    )
    .unwrap();
    let fact = elements_factorization(&empty);
    assert!(fact.category.objects().is_empty());
    assert_eq!(fact.composite.prof.total_elements(), 0);
}

#[test]
fn elements_orientation_regression() {
    // Locks the direction of E(m) morphisms: for the hom profunctor of the
    // 2-chain, (f, f) must be an arrow from (a, a, id_a) to (b, b, id_b)
    // whose compatibility equation reads f·id_b = id_a·f.
    let hom = identity_prof(two_chain());
    let fact = elements_factorization(&hom);
    let src = o("<a|a|id_a>");
    let dst = o("<b|b|id_b>");
    let arrows = fact.category.hom(&src, &dst);
    assert_eq!(arrows.len(), 1);
    assert_eq!(fact.p.on_mor(arrows[0]).as_str(), "f");
    assert_eq!(fact.q.on_mor(arrows[0]).as_str(), "f");
    assert!(fact.category.hom(&dst, &src).is_empty());
}

#[test]
fn prof_json_round_trip_is_canonical() {
    let p = sample_prof();
    let doc = ProfunctorDoc::from_prof(&p);
    let text = serde_json::to_string_pretty(&doc).unwrap();
    let parsed: ProfunctorDoc = serde_json::from_str(&text).unwrap();
    let p2 = parsed.into_prof().unwrap();
    assert_eq!(p, p2);
    let text2 = serde_json::to_string_pretty(&ProfunctorDoc::from_prof(&p2)).unwrap();
    assert_eq!(text, text2);
}

#[test]
fn prof_json_rejects_bad_input() {
    let p = sample_prof();
    let mut doc = ProfunctorDoc::from_prof(&p);
    doc.schema = "prof/v0".into();
    assert!(matches!(doc.into_prof(), Err(ProfDocError::Schema(_))));

    let mut doc = ProfunctorDoc::from_prof(&p);
    doc.left.clear();
    assert!(matches!(
        doc.into_prof(),
        Err(ProfDocError::Data(ProfDataError::MissingLeftTable { .. }))
    ));

    let mut doc = ProfunctorDoc::from_prof(&p);
    doc.elements.insert("only-one-part".into(), vec![e("z")]);
    assert!(matches!(doc.into_prof(), Err(ProfDocError::BadKey(_))));
}

#[test]
fn whiskering_commutes_with_collapse() {
    // Whisker the counit of the collapse functor's adjunction and check
    // lawfulness; exercises whisker_inner/outer on nontrivial composites.
    let c = two_chain();
    let t = terminal();
    let f = Functor::new(
        c.clone(),
        t,
        [(o("a"), o("*")), (o("b"), o("*"))],
        [(m("id_a"), m("id_*")), (m("id_b"), m("id_*")), (m("f"), m("id_*"))],
    )
    .unwrap();
    let s = star(&f);
    let cs = costar(&f);
    let e_comp = compose_prof(&s, &cs).unwrap();
    let eps = adjunction_counit(&f, &e_comp);
    assert!(eps.is_lawful());

    let c_e = compose_prof(&cs, &e_comp.prof).unwrap();
    let c_ib = compose_prof(&cs, &identity_prof(f.target.clone())).unwrap();
    let w = whisker_inner(&c_e, &c_ib, &eps);
    assert!(w.is_lawful(), "{:?}", w.check());
}
