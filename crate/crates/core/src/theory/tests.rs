use super::*;
use crate::builtin::{
    as_operad, ass_operad, chain_semilattice, comm_operad, cyclic_algebra, initial_operad,
    initial_theory, semilattice_clone, terminal_operad, z2_clone,
};
use crate::doctrine::{map_arity, map_word};
use crate::fincat::{FinCategory, Functor, NatTransformation};
use crate::ids::{ElemId, MorId, ObjId};
use crate::theory::monad::induced_monad_on_set;
use std::collections::BTreeMap;
use std::sync::Arc;

fn x() -> ObjId {
    ObjId::new("x")
}

fn nw(n: usize) -> Word {
    Word::new(vec![x(); n])
}

fn arity_counts(m: &Multicategory, upto: usize) -> Vec<usize> {
    (0..=upto).map(|n| m.elems(&nw(n), &x()).len()).collect()
}

#[test]
fn terminal_operads_are_lawful() {
    for d in [Doctrine::Planar, Doctrine::Symmetric, Doctrine::Cartesian] {
        let t = terminal_operad(d, 3);
        assert_eq!(check_theory(&t), vec![], "doctrine {d:?}");
        assert_eq!(arity_counts(&t, 3), vec![1, 1, 1, 1]);
    }
}

#[test]
fn initial_operads_are_lawful() {
    for d in [Doctrine::Planar, Doctrine::Symmetric] {
        let t = initial_operad(d, 3);
        assert_eq!(check_theory(&t), vec![], "doctrine {d:?}");
        assert_eq!(arity_counts(&t, 3), vec![0, 1, 0, 0]);
    }
    let t = initial_operad(Doctrine::Cartesian, 3);
    assert_eq!(check_theory(&t), vec![]);
    assert_eq!(arity_counts(&t, 3), vec![0, 1, 2, 3]);
}

#[test]
fn ass_operad_counts_match_factorials() {
    let ass = ass_operad(4);
    assert_eq!(arity_counts(&ass, 4), vec![1, 1, 2, 6, 24]);
}

#[test]
fn ass_operad_is_lawful() {
    assert_eq!(check_theory(&ass_operad(3)), vec![]);
}

#[test]
fn ass_subst_matches_block_arithmetic() {
    let ass = ass_operad(4);
    let e = |s: &str| ElemId::new(s);
    let got = ass
        .subst_entry(&nw(2), &x(), &e("p21"), &[nw(2), nw(2)], &[e("p12"), e("p21")])
        .unwrap();
    assert_eq!(got, &e("p4312"));
    let got = ass
        .subst_entry(&nw(2), &x(), &e("p12"), &[nw(2), nw(2)], &[e("p21"), e("p12")])
        .unwrap();
    assert_eq!(got, &e("p2134"));
    let got = ass
        .subst_entry(&nw(2), &x(), &e("p21"), &[nw(1), nw(2)], &[e("p1"), e("p21")])
        .unwrap();
    assert_eq!(got, &e("p321"));
    let got = ass
        .subst_entry(&nw(1), &x(), &e("p1"), &[nw(3)], &[e("p231")])
        .unwrap();
    assert_eq!(got, &e("p231"));
}

#[test]
fn clone_counts_meet_and_xor() {
    let meet = semilattice_clone(3);
    assert_eq!(arity_counts(&meet, 3), vec![0, 1, 3, 7]);
    assert!(meet.require_normal);
    assert_eq!(check_theory(&meet), vec![]);

    let xor = z2_clone(3);
    assert_eq!(arity_counts(&xor, 3), vec![0, 2, 4, 8]);
    assert!(!xor.require_normal);
    assert_eq!(check_theory(&xor), vec![]);
}

#[test]
fn full_clone_on_two_elements() {
    let full = crate::theory::set_clone(2, 2);
    assert_eq!(arity_counts(&full, 2), vec![2, 4, 16]);
    assert!(!full.require_normal);
    assert_eq!(check_theory(&full), vec![]);
}

#[test]
fn endomorphism_theories_pass_all_checks() {
    for d in [Doctrine::Planar, Doctrine::Symmetric, Doctrine::Cartesian] {
        for alg in crate::builtin::standard_algebras(d) {
            assert_eq!(alg.validate(), vec![], "algebra in {d:?}");
            let endo = endomorphism_theory(&alg, 2).unwrap();
            assert_eq!(check_theory(&endo), vec![], "endo theory in {d:?}");
        }
    }
}

#[test]
fn endomorphism_counts_are_hom_sizes() {
    let z2 = cyclic_algebra(Doctrine::Planar, 2);
    let endo = endomorphism_theory(&z2, 3).unwrap();
    let (zero, one) = (ObjId::new("0"), ObjId::new("1"));
    let w = |letters: &[&ObjId]| Word::new(letters.iter().map(|o| (*o).clone()).collect::<Vec<_>>());
    assert_eq!(endo.elems(&w(&[&zero, &zero]), &zero).len(), 1);
    assert_eq!(endo.elems(&w(&[&one, &one]), &zero).len(), 1);
    assert_eq!(endo.elems(&w(&[&one]), &zero).len(), 0);
    assert_eq!(endo.elems(&w(&[&one, &one, &one]), &one).len(), 1);

    let chain = chain_semilattice(2);
    let endo = endomorphism_theory(&chain, 2).unwrap();
    assert_eq!(endo.elems(&w(&[&zero, &one]), &zero).len(), 1);
    assert_eq!(endo.elems(&w(&[&zero, &one]), &one).len(), 1);
    assert_eq!(endo.elems(&w(&[&one]), &zero).len(), 0);
}

#[test]
fn induced_monad_counts() {
    assert_eq!(induced_monad_on_set(&comm_operad(3), 2).base.len(), 10);
    assert_eq!(induced_monad_on_set(&as_operad(3), 2).base.len(), 15);
    assert_eq!(induced_monad_on_set(&ass_operad(3), 2).base.len(), 15);
    assert_eq!(
        induced_monad_on_set(&initial_operad(Doctrine::Planar, 3), 2)
            .base
            .len(),
        2
    );
}

#[test]
fn induced_monad_laws_hold() {
    for m in [comm_operad(2), as_operad(2), ass_operad(2)] {
        let ind = induced_monad_on_set(&m, 2);
        assert_ne!(ind.unit(0), ind.unit(1));
        assert_eq!(ind.check_units(), vec![]);
        assert_eq!(ind.check_assoc(), vec![]);
    }
}

#[test]
fn identity_and_initial_maps_check() {
    let ass = Arc::new(ass_operad(2));
    assert_eq!(check_theory_map(&identity_theory_map(&ass)), vec![]);

    let init = Arc::new(initial_operad(Doctrine::Symmetric, 2));
    let comm = Arc::new(comm_operad(2));
    let sorts = Functor::identity(init.sorts().clone());
    let maps = enumerate_theory_maps(&init, &comm, &sorts, &BTreeMap::new(), 100_000).unwrap();
    assert_eq!(maps.len(), 1);
    assert_eq!(check_theory_map(&maps[0]), vec![]);
}

#[test]
fn z2_models_in_the_two_element_set() {
    let m = Arc::new(z2_clone(2));
    let full = Arc::new(crate::theory::set_clone(2, 2));
    let sorts = Functor::identity(m.sorts().clone());

    let maps = enumerate_theory_maps(&m, &full, &sorts, &BTreeMap::new(), 10_000_000).unwrap();
    assert_eq!(maps.len(), 2);
    let mut images: Vec<&ElemId> = maps
        .iter()
        .map(|t| t.component(&nw(2), &x(), &ElemId::new("t0110")).unwrap())
        .collect();
    images.sort();
    assert_eq!(images, vec![&ElemId::new("t0110"), &ElemId::new("t1001")]);
    for t in &maps {
        assert_eq!(check_theory_map(t), vec![]);
    }

    let mut pins = BTreeMap::new();
    pins.insert((nw(1), x(), ElemId::new("t00")), ElemId::new("t00"));
    let pinned = enumerate_theory_maps(&m, &full, &sorts, &pins, 10_000_000).unwrap();
    assert_eq!(pinned.len(), 1);
    assert_eq!(
        pinned[0].component(&nw(2), &x(), &ElemId::new("t0110")),
        Some(&ElemId::new("t0110"))
    );

    assert!(enumerate_theory_maps(&m, &full, &sorts, &BTreeMap::new(), 10).is_err());
}

#[test]
fn initial_operad_has_one_model_per_sort_assignment() {
    let init = Arc::new(initial_operad(Doctrine::Planar, 2));
    let z2 = cyclic_algebra(Doctrine::Planar, 2);
    let models = enumerate_models(&init, &z2, 1_000_000).unwrap();
    assert_eq!(models.len(), 2);
    for t in &models {
        assert_eq!(check_model(&init, &z2, t), vec![]);
    }
    let endo = Arc::new(endomorphism_theory(&z2, 2).unwrap());
    let pick = Functor::new(
        init.sorts().clone(),
        z2.cat.clone(),
        [(x(), ObjId::new("1"))],
        [(
            init.sorts().identity(&x()).clone(),
            z2.cat.identity(&ObjId::new("1")).clone(),
        )],
    )
    .unwrap();
    let fixed = enumerate_theory_maps(&init, &endo, &pick, &BTreeMap::new(), 1_000_000).unwrap();
    assert_eq!(fixed.len(), 1);
}

#[test]
fn single_entry_mutations_are_detected() {
    let mut detected = 0;
    for (base, cap) in [
        (ass_operad(3), 8),
        (z2_clone(2), 8),
        (semilattice_clone(3), 8),
        (crate::theory::set_clone(2, 2), 4),
    ] {
        let mut tried = 0;
        let cells: Vec<(Word, ObjId)> = base.subst.components.keys().cloned().collect();
        'theory: for (w, a) in cells {
            let entries: Vec<(ElemId, ElemId)> = base.subst.components[&(w.clone(), a.clone())]
                .iter()
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect();
            for (cls, val) in entries {
                let Some(other) = base
                    .carrier
                    .elems(&w, &a)
                    .iter()
                    .find(|e| **e != val)
                    .cloned()
                else {
                    continue;
                };
                let mut mutant = base.clone();
                mutant
                    .subst
                    .components
                    .get_mut(&(w.clone(), a.clone()))
                    .unwrap()
                    .insert(cls, other);
                assert!(
                    !check_theory(&mutant).is_empty(),
                    "undetected subst mutation at ({w:?}, {a})"
                );
                detected += 1;
                tried += 1;
                if tried >= cap {
                    break 'theory;
                }
            }
        }
    }

    // unit mutations: a clone with two unary terms can point its unit at
    // the wrong one.
    let base = z2_clone(2);
    let slot = (nw(1), x());
    let keys: Vec<ElemId> = base.unit.components[&slot].keys().cloned().collect();
    for k in keys {
        let mut mutant = base.clone();
        let table = mutant.unit.components.get_mut(&slot).unwrap();
        let wrong = if table[&k] == ElemId::new("t01") {
            ElemId::new("t00")
        } else {
            ElemId::new("t01")
        };
        table.insert(k, wrong);
        assert!(!check_theory(&mutant).is_empty(), "undetected unit mutation");
        detected += 1;
    }

    // component mutations on a theory map.
    let full = Arc::new(crate::theory::set_clone(2, 2));
    let idm = identity_theory_map(&full);
    let slots: Vec<(Word, ObjId)> = idm.components.keys().cloned().collect();
    let mut tried = 0;
    'map: for (w, a) in slots {
        let entries: Vec<ElemId> = idm.components[&(w.clone(), a.clone())].keys().cloned().collect();
        for k in entries {
            let other = full
                .carrier
                .elems(&w, &a)
                .iter()
                .find(|e| **e != k)
                .cloned()
                .unwrap();
            let mut mutant = idm.clone();
            mutant
                .components
                .get_mut(&(w.clone(), a.clone()))
                .unwrap()
                .insert(k, other);
            assert!(
                !check_theory_map(&mutant).is_empty(),
                "undetected map mutation at ({w:?}, {a})"
            );
            detected += 1;
            tried += 1;
            if tried >= 6 {
                break 'map;
            }
        }
    }

    assert!(detected >= 20, "only {detected} mutations exercised");
}

#[test]
fn theory_docs_round_trip() {
    let theories = vec![
        ass_operad(2),
        z2_clone(2),
        initial_operad(Doctrine::Cartesian, 2),
        endomorphism_theory(&cyclic_algebra(Doctrine::Planar, 2), 2).unwrap(),
        endomorphism_theory(&chain_semilattice(2), 2).unwrap(),
    ];
    for m in theories {
        let doc = TheoryDoc::from_theory(&m);
        let text = serde_json::to_string(&doc).unwrap();
        let back: TheoryDoc = serde_json::from_str(&text).unwrap();
        let m2 = back.into_theory().unwrap();
        assert_eq!(m.carrier, m2.carrier);
        assert_eq!(m.unit, m2.unit);
        assert_eq!(m.subst.components, m2.subst.components);
        assert_eq!(m.require_normal, m2.require_normal);
    }
}

#[test]
fn theory_doc_errors_are_reported() {
    let m = ass_operad(2);
    let mut doc = TheoryDoc::from_theory(&m);
    doc.schema = "theory/v0".into();
    assert!(matches!(
        doc.into_theory(),
        Err(TheoryDocError::Schema(_))
    ));

    let mut doc = TheoryDoc::from_theory(&m);
    doc.unit.clear();
    assert!(matches!(
        doc.into_theory(),
        Err(TheoryDocError::MissingUnit(_))
    ));

    let mut doc = TheoryDoc::from_theory(&m);
    doc.subst[0].inner = vec![ElemId::new("nonsense"); doc.subst[0].inner.len()];
    assert!(matches!(
        doc.into_theory(),
        Err(TheoryDocError::SubstClass { .. })
    ));

    let mut doc = TheoryDoc::from_theory(&m);
    let dup = doc.elements[0].clone();
    doc.elements.push(dup);
    assert!(matches!(
        doc.into_theory(),
        Err(TheoryDocError::DuplicateElem { .. })
    ));
}

#[test]
fn algebra_validation_catches_broken_tables() {
    let mut alg = cyclic_algebra(Doctrine::Planar, 2);
    assert_eq!(alg.validate(), vec![]);
    alg.tensor
        .insert((ObjId::new("1"), ObjId::new("1")), ObjId::new("1"));
    assert!(!alg.validate().is_empty());

    let mut alg = chain_semilattice(2);
    assert_eq!(alg.validate(), vec![]);
    if let super::Structure::Cartesian { proj1, .. } = &mut alg.structure {
        let key = (ObjId::new("0"), ObjId::new("1"));
        let id1 = MorId::new("1<=1");
        proj1.insert(key, id1);
    }
    assert!(!alg.validate().is_empty());
}

#[test]
fn sort_permuting_maps_check_and_fail() {
    let cat = Arc::new(FinCategory::discrete([ObjId::new("s"), ObjId::new("t")]));
    let th = Arc::new(initial_theory(cat.clone(), Doctrine::Planar, 2));
    let swap = Functor::new(
        cat.clone(),
        cat.clone(),
        [
            (ObjId::new("s"), ObjId::new("t")),
            (ObjId::new("t"), ObjId::new("s")),
        ],
        [
            (MorId::new("id_s"), MorId::new("id_t")),
            (MorId::new("id_t"), MorId::new("id_s")),
        ],
    )
    .unwrap();

    let components: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>> = th
        .carrier
        .cells()
        .map(|(w, a, elems)| {
            let table = elems
                .iter()
                .map(|e| {
                    let u = th.units().arity(w, a, e);
                    (e.clone(), ElemId::new(map_arity(&swap, u).name()))
                })
                .collect();
            ((w.clone(), a.clone()), table)
        })
        .collect();
    let good = TheoryMap {
        source: th.clone(),
        target: th.clone(),
        sorts: swap,
        components,
    };
    assert_eq!(check_theory_map(&good), vec![]);
    assert_eq!(map_word(&good.sorts, &Word::new(vec![ObjId::new("s")])), Word::new(vec![ObjId::new("t")]));

    let mut bad = good.clone();
    let slot = (Word::new(vec![ObjId::new("s")]), ObjId::new("s"));
    let table = bad.components.get_mut(&slot).unwrap();
    let (k, _) = table.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
    table.insert(k.clone(), k);
    let report = check_theory_map(&bad);
    assert!(report
        .iter()
        .any(|v| matches!(v, MapViolation::NotInCell { .. } | MapViolation::Unit { .. })));
}

#[test]
fn theory_cells_between_reindexing_maps() {
    let chain = chain_semilattice(2);
    let cat = chain.cat.clone();
    let th = Arc::new(initial_theory(cat.clone(), Doctrine::Planar, 2));
    let idm = identity_theory_map(&th);

    let ident = NatTransformation {
        source: idm.sorts.clone(),
        target: idm.sorts.clone(),
        components: cat
            .objects()
            .iter()
            .map(|o| (o.clone(), cat.identity(o).clone()))
            .collect(),
    };
    let cell = TheoryCell {
        source: idm.clone(),
        target: idm.clone(),
        nat: ident,
    };
    assert_eq!(check_theory_cell(&cell), vec![]);

    // collapse everything to the top and compare against the identity.
    let one = ObjId::new("1");
    let to_top = Functor::new(
        cat.clone(),
        cat.clone(),
        cat.objects().iter().map(|o| (o.clone(), one.clone())),
        cat.morphisms()
            .iter()
            .map(|f| (f.id.clone(), cat.identity(&one).clone())),
    )
    .unwrap();
    let components: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>> = th
        .carrier
        .cells()
        .map(|(w, a, elems)| {
            let table = elems
                .iter()
                .map(|e| {
                    let u = th.units().arity(w, a, e);
                    (e.clone(), ElemId::new(map_arity(&to_top, u).name()))
                })
                .collect();
            ((w.clone(), a.clone()), table)
        })
        .collect();
    let collapse = TheoryMap {
        source: th.clone(),
        target: th.clone(),
        sorts: to_top.clone(),
        components,
    };
    assert_eq!(check_theory_map(&collapse), vec![]);

    let nat = NatTransformation {
        source: idm.sorts.clone(),
        target: to_top,
        components: cat
            .objects()
            .iter()
            .map(|o| (o.clone(), MorId::new(format!("{o}<=1"))))
            .collect(),
    };
    assert!(nat.is_lawful());
    let cell = TheoryCell {
        source: idm,
        target: collapse,
        nat,
    };
    assert_eq!(check_theory_cell(&cell), vec![]);

    // an unlawful transformation is a frame error.
    let mut broken = cell.clone();
    broken
        .nat
        .components
        .insert(one.clone(), MorId::new("0<=1"));
    assert!(check_theory_cell(&broken).contains(&MapViolation::CellFrame));
}
