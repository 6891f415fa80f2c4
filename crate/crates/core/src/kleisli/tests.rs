use super::*;
use crate::doctrine::{s_hom, s_objects_upto, ArityMap, Doctrine, Word};
use crate::fincat::{FinCategory, Functor, Mor};
use crate::profunctor::identity_prof;
use crate::util::UnionFind;
use itertools::Itertools;
use std::collections::BTreeSet;

fn o(s: &str) -> ObjId {
    ObjId::new(s)
}
fn m(s: &str) -> MorId {
    MorId::new(s)
}

fn one_obj() -> Arc<FinCategory> {
    Arc::new(FinCategory::discrete([o("x")]))
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

fn xn(n: usize) -> Word {
    Word::new(vec![o("x"); n])
}

/// The graded profunctor `hom(-, F(-))` of a word-valued assignment: cells
/// at `(w, a)` are the arity maps `w -> F(a)`, with composition actions.
fn graded_star(
    source: &Arc<FinCategory>,
    base: &Arc<FinCategory>,
    d: Doctrine,
    k: usize,
    fobj: &BTreeMap<ObjId, Word>,
    fmor: &BTreeMap<MorId, ArityMap>,
) -> GradedProfunctor {
    let mut cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = BTreeMap::new();
    let mut arities: BTreeMap<(Word, ObjId, ElemId), ArityMap> = BTreeMap::new();
    for w in s_objects_upto(base, k) {
        for a in source.objects() {
            let maps = s_hom(base, d, &w, &fobj[a]);
            if maps.is_empty() {
                continue;
            }
            let mut elems = Vec::new();
            for u in maps {
                let id = ElemId::new(u.name());
                arities.insert((w.clone(), a.clone(), id.clone()), u);
                elems.push(id);
            }
            cells.insert((w.clone(), a.clone()), elems);
        }
    }
    GradedProfunctor::from_actions(
        d,
        source.clone(),
        base.clone(),
        k,
        cells,
        |h, a, x| {
            let u = &arities[&(h.target.clone(), a.clone(), x.clone())];
            ElemId::new(u.compose(h, base).name())
        },
        |w, alpha, x| {
            let src = source.mor(alpha).unwrap().src.clone();
            let u = &arities[&(w.clone(), src, x.clone())];
            ElemId::new(fmor[alpha].compose(u, base).name())
        },
    )
    .unwrap()
}

/// One-object fixture: elements at `(xⁿ, x)` are the arity maps `xⁿ → xᵃ`.
fn power_operad(d: Doctrine, arity: usize, k: usize) -> GradedProfunctor {
    let cat = one_obj();
    let fobj = BTreeMap::from([(o("x"), xn(arity))]);
    let fmor = BTreeMap::from([(
        m("id_x"),
        ArityMap::identity(d, xn(arity), &cat),
    )]);
    graded_star(&cat, &cat, d, k, &fobj, &fmor)
}

fn id_mor_of(cat: &Arc<FinCategory>) -> MorId {
    cat.identity(&cat.objects()[0]).clone()
}

#[test]
fn one_element_arity_two_composite_counts() {
    let f = power_operad(Doctrine::Planar, 2, 5);
    let g = f.clone();
    let comp = subst_compose(&g, &f).unwrap();
    assert_eq!(comp.graded.elems(&xn(4), &o("x")).len(), 1);
    assert_eq!(comp.graded.elems(&xn(3), &o("x")).len(), 0);
    assert_eq!(comp.graded.elems(&xn(5), &o("x")).len(), 0);
    assert_eq!(comp.graded.elems(&xn(2), &o("x")).len(), 0);
    assert!(comp.graded.is_lawful());
}

#[test]
fn empty_factor_gives_empty_composite() {
    let cat = one_obj();
    let f = power_operad(Doctrine::Planar, 2, 3);
    let empty = GradedProfunctor::new(
        Doctrine::Planar,
        cat.clone(),
        cat.clone(),
        3,
        BTreeMap::new(),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap();
    assert_eq!(subst_compose(&empty, &f).unwrap().graded.total_elements(), 0);
    assert_eq!(subst_compose(&f, &empty).unwrap().graded.total_elements(), 0);
}

#[test]
fn unit_counts_match_doctrine() {
    for d in [Doctrine::Planar, Doctrine::Symmetric] {
        let u = kleisli_unit(one_obj(), d, 3);
        assert_eq!(u.graded.elems(&xn(1), &o("x")).len(), 1, "{d}");
        assert_eq!(u.graded.elems(&xn(2), &o("x")).len(), 0, "{d}");
        assert_eq!(u.graded.elems(&xn(0), &o("x")).len(), 0, "{d}");
    }
    let u = kleisli_unit(one_obj(), Doctrine::Cartesian, 3);
    for n in 1..=3 {
        assert_eq!(u.graded.elems(&xn(n), &o("x")).len(), n);
    }
    let u = kleisli_unit(two_chain(), Doctrine::Cartesian, 2);
    let ab = Word::new([o("a"), o("b")]);
    assert_eq!(u.graded.elems(&ab, &o("b")).len(), 2);
    assert_eq!(u.graded.elems(&ab, &o("a")).len(), 1);
    assert!(u.graded.is_lawful());
}

fn assert_unit_laws(f: &GradedProfunctor, u: &KleisliUnit, m: &GradedProfunctor) {
    let comp = subst_compose(&u.graded, f).unwrap();
    let (to, from) = unit_outer_cells(&comp, u);
    assert!(to.check().is_empty(), "outer to: {:?}", to.check());
    assert!(from.check().is_empty(), "outer from: {:?}", from.check());
    assert!(to.is_inverse_of(&from));

    let comp = subst_compose(m, &u.graded).unwrap();
    let (to, from) = unit_inner_cells(&comp, u);
    assert!(to.check().is_empty(), "inner to: {:?}", to.check());
    assert!(from.check().is_empty(), "inner from: {:?}", from.check());
    assert!(to.is_inverse_of(&from));
}

#[test]
fn unit_laws_over_one_object() {
    for d in Doctrine::ALL {
        let k = 4;
        let f = power_operad(d, 2, k);
        let u = kleisli_unit(one_obj(), d, k);
        assert_unit_laws(&f, &u, &f);
    }
}

#[test]
fn unit_laws_over_chain_bases() {
    let chain = two_chain();
    let point = one_obj();
    for d in Doctrine::ALL {
        let k = 2;
        // f: point ⇸ S(chain), outer unit over the chain.
        let word = match d {
            Doctrine::Cartesian => Word::new([o("b")]),
            _ => Word::new([o("a"), o("b")]),
        };
        let fobj = BTreeMap::from([(o("x"), word)]);
        let fmor = BTreeMap::from([(
            m("id_x"),
            ArityMap::identity(d, fobj[&o("x")].clone(), &chain),
        )]);
        let f = graded_star(&point, &chain, d, k, &fobj, &fmor);
        let u = kleisli_unit(chain.clone(), d, k);
        let comp = subst_compose(&u.graded, &f).unwrap();
        let (to, from) = unit_outer_cells(&comp, &u);
        assert!(to.check().is_empty(), "{d}: {:?}", to.check());
        assert!(from.check().is_empty(), "{d}: {:?}", from.check());
        assert!(to.is_inverse_of(&from), "{d}");

        // m: chain ⇸ S(point), inner unit over the chain.
        let fobj = BTreeMap::from([
            (o("a"), xn(1)),
            (o("b"), if d == Doctrine::Cartesian { xn(2) } else { xn(1) }),
        ]);
        let fmor = BTreeMap::from([
            (m("id_a"), ArityMap::identity(d, fobj[&o("a")].clone(), &point)),
            (m("id_b"), ArityMap::identity(d, fobj[&o("b")].clone(), &point)),
            (
                m("f"),
                ArityMap::pure(
                    d,
                    fobj[&o("a")].clone(),
                    fobj[&o("b")].clone(),
                    vec![0; fobj[&o("b")].len()],
                    &point,
                )
                .unwrap(),
            ),
        ]);
        let mm = graded_star(&chain, &point, d, k, &fobj, &fmor);
        let comp = subst_compose(&mm, &u.graded).unwrap();
        let (to, from) = unit_inner_cells(&comp, &u);
        assert!(to.check().is_empty(), "{d}: {:?}", to.check());
        assert!(from.check().is_empty(), "{d}: {:?}", from.check());
        assert!(to.is_inverse_of(&from), "{d}");
    }
}

#[test]
fn unit_of_unit_is_unit() {
    for d in Doctrine::ALL {
        let u = kleisli_unit(one_obj(), d, 3);
        let comp = subst_compose(&u.graded, &u.graded).unwrap();
        assert_eq!(comp.graded.total_elements(), u.graded.total_elements(), "{d}");
        let (to, from) = unit_outer_cells(&comp, &u);
        assert!(to.check().is_empty() && from.check().is_empty(), "{d}");
        assert!(to.is_inverse_of(&from), "{d}");
        let (to, from) = unit_inner_cells(&comp, &u);
        assert!(to.check().is_empty() && from.check().is_empty(), "{d}");
        assert!(to.is_inverse_of(&from), "{d}");
    }
}

fn assert_total_inverse_witness(w: &AssocWitness) {
    let violations = w.check();
    assert!(violations.is_empty(), "{violations:?}");
    for (cell, table) in w.left.cells().map(|(c, a, t)| ((c.clone(), a.clone()), t)) {
        let fwd = &w.to_right.components[&cell];
        assert_eq!(fwd.len(), table.rep_of.len(), "to_right not total at {cell:?}");
    }
    for (cell, table) in w.right.cells().map(|(c, a, t)| ((c.clone(), a.clone()), t)) {
        let bwd = &w.to_left.components[&cell];
        assert_eq!(bwd.len(), table.rep_of.len(), "to_left not total at {cell:?}");
    }
}

#[test]
fn associativity_of_one_element_operads() {
    for d in [Doctrine::Planar, Doctrine::Symmetric] {
        let k = 3;
        let h = power_operad(d, 2, k);
        let g = power_operad(d, 1, k);
        let f = power_operad(d, 1, k);
        let w = assoc_witness(&h, &g, &f).unwrap();
        for (cw, a, table) in w.left.cells() {
            let other = w.right.table(cw, a).map_or(0, |t| t.rep_of.len());
            assert_eq!(table.rep_of.len(), other, "{d} at ({cw}, {a})");
        }
        assert_total_inverse_witness(&w);
        assert!(w.left.graded.total_elements() > 0, "{d}: vacuous fixture");
    }
}

#[test]
fn associativity_with_units_degenerates() {
    for d in Doctrine::ALL {
        let k = 3;
        let u = kleisli_unit(one_obj(), d, k).graded;
        let g = power_operad(d, if d == Doctrine::Planar { 2 } else { 1 }, k);
        let f = kleisli_unit(one_obj(), d, k).graded;
        for (h, g, f) in [(&u, &g, &f), (&g, &u, &f), (&g, &f, &u)] {
            let w = assoc_witness(h, g, f).unwrap();
            assert_total_inverse_witness(&w);
            assert_eq!(
                w.left.graded.total_elements(),
                w.right.graded.total_elements(),
                "{d}"
            );
        }
    }
}

// ---- independent closure oracle for the substitution composite ----

/// A raw composite tuple before normalization: an element word (block
/// word, middle letter, outer element per letter), an attachment `v` of
/// the middle letters onto a word with inner elements, an inner element,
/// and an arbitrary (not necessarily pure) matching of the cell word
/// against the flattened blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RawNode {
    letters: Vec<(Word, ObjId, ElemId)>,
    v: ArityMap,
    x: ElemId,
    psi: ArityMap,
}

struct HomCache<'c> {
    cat: &'c FinCategory,
    d: Doctrine,
    table: BTreeMap<(Word, Word), Vec<ArityMap>>,
}

impl<'c> HomCache<'c> {
    fn new(cat: &'c FinCategory, d: Doctrine) -> Self {
        HomCache { cat, d, table: BTreeMap::new() }
    }
    fn get(&mut self, x: &Word, y: &Word) -> &[ArityMap] {
        self.table
            .entry((x.clone(), y.clone()))
            .or_insert_with(|| s_hom(self.cat, self.d, x, y))
    }
}

fn sp_word(letters: &[(Word, ObjId, ElemId)]) -> Word {
    Word::new(letters.iter().map(|(_, b, _)| b.clone()).collect::<Vec<_>>())
}

fn flat_word(letters: &[(Word, ObjId, ElemId)]) -> Word {
    Word::new(
        letters
            .iter()
            .flat_map(|(w, _, _)| w.letters().iter().cloned())
            .collect::<Vec<_>>(),
    )
}

/// All sequences over the element pool with total block length ≤ k and at
/// most k letters.
fn element_words(pool: &[(Word, ObjId, ElemId)], k: usize) -> Vec<Vec<(Word, ObjId, ElemId)>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0usize)];
    while let Some((seq, used)) = frontier.pop() {
        if seq.len() == k {
            continue;
        }
        for e in pool {
            let used = used + e.0.len();
            if used > k {
                continue;
            }
            let mut next = seq.clone();
            next.push(e.clone());
            out.push(next.clone());
            frontier.push((next, used));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn index_sequences(m: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for i in 0..m {
                let mut s = seq.clone();
                s.push(i);
                out.push(s.clone());
                next.push(s);
            }
        }
        layer = next;
    }
    out
}

/// Blockwise map `flat(letters) -> flat(letters')` that applies `inner`
/// at block `at` and shifts the identity around it.
fn blockwise(
    letters: &[(Word, ObjId, ElemId)],
    at: usize,
    inner: &ArityMap,
    d: Doctrine,
    cat: &FinCategory,
) -> ArityMap {
    let mut index = Vec::new();
    let mut arrows = Vec::new();
    let mut off = 0;
    for (j, (wj, _, _)) in letters.iter().enumerate() {
        if j == at {
            for t in 0..inner.target.len() {
                index.push(off + inner.index[t]);
                arrows.push(inner.arrows[t].clone());
            }
        } else {
            for t in 0..wj.len() {
                index.push(off + t);
                arrows.push(cat.identity(&wj.letters()[t]).clone());
            }
        }
        off += wj.len();
    }
    let mut target_letters = Vec::new();
    for (j, (wj, _, _)) in letters.iter().enumerate() {
        if j == at {
            target_letters.extend(inner.target.letters().iter().cloned());
        } else {
            target_letters.extend(wj.letters().iter().cloned());
        }
    }
    ArityMap::new(
        d,
        flat_word(letters),
        Word::new(target_letters),
        index,
        arrows,
        cat,
    )
    .unwrap()
}

/// Reindexing map `flat(letters) -> flat(letters[idx[0]], …)` with
/// identity arrows.
fn regroup(
    letters: &[(Word, ObjId, ElemId)],
    idx: &[usize],
    d: Doctrine,
    cat: &FinCategory,
) -> ArityMap {
    let offsets: Vec<usize> = letters
        .iter()
        .scan(0, |acc, (w, _, _)| {
            let here = *acc;
            *acc += w.len();
            Some(here)
        })
        .collect();
    let mut index = Vec::new();
    for &j in idx {
        for t in 0..letters[j].0.len() {
            index.push(offsets[j] + t);
        }
    }
    let target: Vec<(Word, ObjId, ElemId)> = idx.iter().map(|&j| letters[j].clone()).collect();
    ArityMap::pure(d, flat_word(letters), flat_word(&target), index, cat).unwrap()
}

/// Compute the cell `(w, a)` of `outer ⊙ inner` by brute closure over raw
/// tuples, with the full move set: attachment moves along every arity map
/// of the middle base, pure reindexings of the element word, and
/// single-letter moves along arrows of the two-sided category of elements
/// of `outer`.  Returns the partition as lists of raw nodes.
fn closure_classes(
    outer: &GradedProfunctor,
    inner: &GradedProfunctor,
    w: &Word,
    a: &ObjId,
) -> (BTreeMap<RawNode, usize>, UnionFind) {
    let d = outer.doctrine;
    let k = outer.bound.min(inner.bound);
    let b_cat: &FinCategory = inner.base_target();
    let c_cat: &FinCategory = outer.base_target();
    let mut b_homs = HomCache::new(b_cat, d);
    let mut c_homs = HomCache::new(c_cat, d);

    let pool: Vec<(Word, ObjId, ElemId)> = outer
        .cells()
        .flat_map(|(w, b, elems)| {
            elems
                .iter()
                .map(|y| (w.clone(), b.clone(), y.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    let eseqs = element_words(&pool, k);
    let mids: Vec<Word> = s_objects_upto(b_cat, k)
        .into_iter()
        .filter(|bw| !inner.elems(bw, a).is_empty())
        .collect();

    let mut nodes: BTreeMap<RawNode, usize> = BTreeMap::new();
    for seq in &eseqs {
        let sp = sp_word(seq);
        let flat = flat_word(seq);
        for mid in &mids {
            for v in b_homs.get(&sp, mid).to_vec() {
                for x in inner.elems(mid, a) {
                    for psi in c_homs.get(w, &flat).to_vec() {
                        let node = RawNode {
                            letters: seq.clone(),
                            v: v.clone(),
                            x: x.clone(),
                            psi,
                        };
                        let n = nodes.len();
                        nodes.entry(node).or_insert(n);
                    }
                }
            }
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    let at = |nodes: &BTreeMap<RawNode, usize>, n: &RawNode| -> usize {
        *nodes.get(n).unwrap_or_else(|| panic!("raw move left the node space: {n:?}"))
    };

    let b_words = s_objects_upto(b_cat, k);
    let mut betas: Vec<ArityMap> = Vec::new();
    for x in &b_words {
        for y in &b_words {
            betas.extend(b_homs.get(x, y).to_vec());
        }
    }

    for seq in &eseqs {
        let sp = sp_word(seq);
        let flat = flat_word(seq);
        let psis = c_homs.get(w, &flat).to_vec();

        // Attachment moves: for β: 𝐛 -> 𝐛', relate x·β attached by v with
        // x attached by β∘v.
        for beta in &betas {
            if inner.elems(&beta.target, a).is_empty() || inner.elems(&beta.source, a).is_empty() {
                continue;
            }
            for v in b_homs.get(&sp, &beta.source).to_vec() {
                let bv = beta.compose(&v, b_cat);
                for x_up in inner.elems(&beta.target, a) {
                    let x_dn = inner.left(beta, a, x_up).clone();
                    for psi in &psis {
                        let lo = at(&nodes, &RawNode {
                            letters: seq.clone(),
                            v: v.clone(),
                            x: x_dn.clone(),
                            psi: psi.clone(),
                        });
                        let hi = at(&nodes, &RawNode {
                            letters: seq.clone(),
                            v: bv.clone(),
                            x: x_up.clone(),
                            psi: psi.clone(),
                        });
                        uf.union(lo, hi);
                    }
                }
            }
        }

        // Pure reindexings of the element word.  The target word is built
        // from the index, so any permutation is letter-compatible.
        let idxs: Vec<Vec<usize>> = match d {
            Doctrine::Planar => Vec::new(),
            Doctrine::Symmetric => (0..seq.len()).permutations(seq.len()).collect(),
            Doctrine::Cartesian => index_sequences(seq.len(), k),
        };
        for idx in idxs {
            let target: Vec<(Word, ObjId, ElemId)> =
                idx.iter().map(|&j| seq[j].clone()).collect();
            if flat_word(&target).len() > k {
                continue;
            }
            let sp_t = sp_word(&target);
            let sp_gamma = ArityMap::pure(d, sp.clone(), sp_t.clone(), idx.clone(), b_cat).unwrap();
            let mu_gamma = regroup(seq, &idx, d, c_cat);
            for mid in &mids {
                for v_up in b_homs.get(&sp_t, mid).to_vec() {
                    let v_dn = v_up.compose(&sp_gamma, b_cat);
                    for x in inner.elems(mid, a) {
                        for psi in &psis {
                            let psi_up = mu_gamma.compose(psi, c_cat);
                            let lo = at(&nodes, &RawNode {
                                letters: seq.clone(),
                                v: v_dn.clone(),
                                x: x.clone(),
                                psi: psi.clone(),
                            });
                            let hi = at(&nodes, &RawNode {
                                letters: target.clone(),
                                v: v_up.clone(),
                                x: x.clone(),
                                psi: psi_up,
                            });
                            uf.union(lo, hi);
                        }
                    }
                }
            }
        }

        // Single-letter moves along arrows of the category of elements:
        // (w_i, b_i, y_i) -> (w', b', y') when pushing y_i along β agrees
        // with pulling y' back along ω.
        for i in 0..seq.len() {
            let (wi, bi, yi) = &seq[i];
            for (we, be, ye) in &pool {
                for beta in b_cat.morphisms() {
                    if &beta.src != bi || &beta.dst != be {
                        continue;
                    }
                    let pushed = outer.right(wi, &beta.id, yi).clone();
                    for omega in c_homs.get(wi, we).to_vec() {
                        if outer.left(&omega, be, ye) != &pushed {
                            continue;
                        }
                        let mut target = seq.clone();
                        target[i] = (we.clone(), be.clone(), ye.clone());
                        if flat_word(&target).len() > k {
                            continue;
                        }
                        let sp_t = sp_word(&target);
                        let arrows: Vec<MorId> = seq
                            .iter()
                            .enumerate()
                            .map(|(j, (_, bj, _))| {
                                if j == i {
                                    beta.id.clone()
                                } else {
                                    b_cat.identity(bj).clone()
                                }
                            })
                            .collect();
                        let sp_gamma = ArityMap::new(
                            d,
                            sp.clone(),
                            sp_t.clone(),
                            (0..seq.len()).collect(),
                            arrows,
                            b_cat,
                        )
                        .unwrap();
                        let mu_gamma = blockwise(seq, i, &omega, d, c_cat);
                        for mid in &mids {
                            for v_up in b_homs.get(&sp_t, mid).to_vec() {
                                let v_dn = v_up.compose(&sp_gamma, b_cat);
                                for x in inner.elems(mid, a) {
                                    for psi in &psis {
                                        let psi_up = mu_gamma.compose(psi, c_cat);
                                        let lo = at(&nodes, &RawNode {
                                            letters: seq.clone(),
                                            v: v_dn.clone(),
                                            x: x.clone(),
                                            psi: psi.clone(),
                                        });
                                        let hi = at(&nodes, &RawNode {
                                            letters: target.clone(),
                                            v: v_up.clone(),
                                            x: x.clone(),
                                            psi: psi_up,
                                        });
                                        uf.union(lo, hi);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (nodes, uf)
}

/// Absorb the arrow content of a raw node into its elements, producing the
/// normal form the substitution composite enumerates.
fn normalize(
    outer: &GradedProfunctor,
    inner: &GradedProfunctor,
    a: &ObjId,
    node: &RawNode,
) -> SubstTuple {
    let d = outer.doctrine;
    let c_cat: &FinCategory = outer.base_target();
    let x = inner.left(&node.v, a, &node.x).clone();
    let mid = node.v.source.clone();
    let mut blocks = Vec::new();
    let mut ys = Vec::new();
    let mut off = 0;
    for (wc, b, y) in &node.letters {
        let len = wc.len();
        let low = Word::new(
            (0..len)
                .map(|t| node.psi.source.letters()[node.psi.index[off + t]].clone())
                .collect::<Vec<_>>(),
        );
        let absorb = ArityMap::new(
            d,
            low.clone(),
            wc.clone(),
            (0..len).collect(),
            node.psi.arrows[off..off + len].to_vec(),
            c_cat,
        )
        .unwrap();
        ys.push(outer.left(&absorb, b, y).clone());
        blocks.push(low);
        off += len;
    }
    SubstTuple { mid, blocks, x, ys, psi: node.psi.index.clone() }
}

fn assert_matches_oracle(outer: &GradedProfunctor, inner: &GradedProfunctor) {
    let comp = subst_compose(outer, inner).unwrap();
    assert!(comp.graded.is_lawful());
    let k = comp.graded.bound;
    let c_base = outer.base_target().clone();
    for w in s_objects_upto(&c_base, k) {
        for a in inner.source().objects().to_vec() {
            let (nodes, uf) = closure_classes(outer, inner, &w, &a);
            let mut fwd: BTreeMap<usize, ElemId> = BTreeMap::new();
            let mut bwd: BTreeMap<ElemId, (usize, RawNode)> = BTreeMap::new();
            for (node, &i) in &nodes {
                let root = uf.find(i);
                let t = normalize(outer, inner, &a, node);
                let cls = comp
                    .class(&w, &a, &t)
                    .unwrap_or_else(|| panic!("normal form missing at ({w}, {a}): {t:?}"))
                    .clone();
                if let Some(prev) = fwd.insert(root, cls.clone()) {
                    assert_eq!(prev, cls, "oracle class split by the composite at ({w}, {a})");
                }
                if let Some((prev, witness)) = bwd.insert(cls.clone(), (root, node.clone())) {
                    assert_eq!(
                        prev, root,
                        "composite class split by the oracle at ({w}, {a}):\n  {witness:?}\n  {node:?}"
                    );
                }
            }
            let count = comp.table(&w, &a).map_or(0, |t| t.rep_of.len());
            assert_eq!(fwd.len(), count, "class count differs at ({w}, {a})");
        }
    }
}

#[test]
fn composite_matches_closure_oracle_over_one_object() {
    let cases = [
        (Doctrine::Planar, 2, 4),
        (Doctrine::Symmetric, 2, 4),
        (Doctrine::Cartesian, 2, 2),
    ];
    for (d, arity, k) in cases {
        let f = power_operad(d, arity, k);
        assert_matches_oracle(&f, &f);
        let u = kleisli_unit(one_obj(), d, k).graded;
        assert_matches_oracle(&f, &u);
        assert_matches_oracle(&u, &f);
    }
}

#[test]
fn composite_matches_closure_oracle_over_chains() {
    let chain = two_chain();
    let point = one_obj();
    for d in Doctrine::ALL {
        let k = 2;
        // g: chain ⇸ S(chain) hom-induced; f: point ⇸ S(chain).
        let (ga, gb) = match d {
            Doctrine::Cartesian => (Word::new([o("a")]), Word::new([o("a"), o("b")])),
            _ => (Word::new([o("a")]), Word::new([o("b")])),
        };
        let gmor_f = match d {
            Doctrine::Cartesian => ArityMap::new(
                d,
                ga.clone(),
                gb.clone(),
                vec![0, 0],
                vec![m("id_a"), m("f")],
                &chain,
            )
            .unwrap(),
            _ => ArityMap::new(d, ga.clone(), gb.clone(), vec![0], vec![m("f")], &chain).unwrap(),
        };
        let gobj = BTreeMap::from([(o("a"), ga.clone()), (o("b"), gb.clone())]);
        let gmor = BTreeMap::from([
            (m("id_a"), ArityMap::identity(d, ga.clone(), &chain)),
            (m("id_b"), ArityMap::identity(d, gb.clone(), &chain)),
            (m("f"), gmor_f),
        ]);
        let g = graded_star(&chain, &chain, d, k, &gobj, &gmor);

        let fw = match d {
            Doctrine::Cartesian => Word::new([o("b")]),
            _ => Word::new([o("a"), o("b")]),
        };
        let fobj = BTreeMap::from([(o("x"), fw.clone())]);
        let fmor = BTreeMap::from([(m("id_x"), ArityMap::identity(d, fw, &chain))]);
        let f = graded_star(&point, &chain, d, k, &fobj, &fmor);

        assert_matches_oracle(&g, &f);
    }
}

#[test]
fn raising_bound_preserves_classes() {
    for d in Doctrine::ALL {
        let (lo, hi) = if d == Doctrine::Cartesian { (2, 3) } else { (4, 5) };
        let small = subst_compose(&power_operad(d, 2, lo), &power_operad(d, 2, lo)).unwrap();
        let big = subst_compose(&power_operad(d, 2, hi), &power_operad(d, 2, hi)).unwrap();
        for (w, a, table) in small.cells() {
            let ids: BTreeSet<&ElemId> = table.rep_of.keys().collect();
            let big_ids: BTreeSet<&ElemId> = big
                .table(w, a)
                .map(|t| t.rep_of.keys().collect())
                .unwrap_or_default();
            assert!(
                ids.is_subset(&big_ids),
                "{d} at ({w}, {a}): {ids:?} not within {big_ids:?}"
            );
        }
    }
}

// ---- word-level extension ----

#[test]
fn extension_of_identity_is_identity() {
    let chain = two_chain();
    for d in Doctrine::ALL {
        let ext = s_extend(&identity_prof(chain.clone()), d, 2);
        let (to, from) = star_extension_cells(&ext, &Functor::identity(chain.clone()));
        assert!(to.check().is_empty(), "{d}: {:?}", to.check());
        assert!(from.check().is_empty(), "{d}: {:?}", from.check());
        assert!(to.is_inverse_of(&from), "{d}");
        // The comparison target is literally the hom profunctor of the
        // word category.
        assert_eq!(to.target, identity_prof(ext.source_words.cat.clone()), "{d}");
    }
}

#[test]
fn extension_of_star_matches_word_level_star() {
    let chain = two_chain();
    let point = one_obj();
    let collapse = Functor::new(
        chain.clone(),
        point.clone(),
        [(o("a"), o("x")), (o("b"), o("x"))],
        [
            (m("id_a"), id_mor_of(&point)),
            (m("id_b"), id_mor_of(&point)),
            (m("f"), id_mor_of(&point)),
        ],
    )
    .unwrap();
    for d in Doctrine::ALL {
        let ext = s_extend(&crate::profunctor::star(&collapse), d, 2);
        let (to, from) = star_extension_cells(&ext, &collapse);
        assert!(to.check().is_empty(), "{d}: {:?}", to.check());
        assert!(from.check().is_empty(), "{d}: {:?}", from.check());
        assert!(to.is_inverse_of(&from), "{d}");
    }
}

#[test]
fn extension_counts_for_two_parallel_elements() {
    let src = Arc::new(FinCategory::discrete([o("s")]));
    let dst = Arc::new(FinCategory::discrete([o("t")]));
    let cells = BTreeMap::from([(
        (o("t"), o("s")),
        vec![ElemId::new("e1"), ElemId::new("e2")],
    )]);
    let m = crate::profunctor::Profunctor::from_actions(
        src.clone(),
        dst.clone(),
        cells,
        |_, _, x| x.clone(),
        |_, _, x| x.clone(),
    )
    .unwrap();
    let ext = s_extend(&m, Doctrine::Planar, 2);
    let at = |n: usize, m_: usize| {
        let bw = Word::new(vec![o("t"); n]);
        let aw = Word::new(vec![o("s"); m_]);
        ext.prof()
            .elems(ext.target_words.obj(&bw), ext.source_words.obj(&aw))
            .len()
    };
    assert_eq!(at(2, 2), 4);
    assert_eq!(at(1, 1), 2);
    assert_eq!(at(2, 1), 0);
    assert_eq!(at(0, 0), 1);
}

// ---- serialization ----

#[test]
fn graded_json_round_trips() {
    let g = kleisli_unit(two_chain(), Doctrine::Cartesian, 2).graded;
    let doc = GradedDoc::from_graded(&g);
    let text = serde_json::to_string_pretty(&doc).unwrap();
    let back: GradedDoc = serde_json::from_str(&text).unwrap();
    let round = back.into_graded().unwrap();
    assert_eq!(round, g);
    let again = serde_json::to_string_pretty(&GradedDoc::from_graded(&round)).unwrap();
    assert_eq!(text, again);
}

#[test]
fn graded_json_rejects_bad_documents() {
    let g = power_operad(Doctrine::Planar, 1, 2);
    let good = GradedDoc::from_graded(&g);

    let mut bad = good.clone();
    bad.schema = "prof/v1".into();
    assert!(matches!(bad.into_graded(), Err(GradedDocError::Schema(_))));

    let mut bad = GradedDoc::from_graded(&power_operad(Doctrine::Planar, 2, 2));
    bad.bound = 1;
    assert!(matches!(bad.into_graded(), Err(GradedDocError::Graded(_))));

    let mut bad = good.clone();
    bad.left[0].index = vec![7];
    assert!(matches!(bad.into_graded(), Err(GradedDocError::Arity(_))));

    let mut bad = good.clone();
    let dup = bad.elements[0].clone();
    bad.elements.push(dup);
    assert!(matches!(bad.into_graded(), Err(GradedDocError::DuplicateEntry)));

    // Reinterpreting a planar operad with binary cells as symmetric leaves
    // the swap actions without tables.
    let mut bad = GradedDoc::from_graded(&power_operad(Doctrine::Planar, 2, 2));
    bad.doctrine = Doctrine::Symmetric;
    assert!(matches!(
        bad.into_graded(),
        Err(GradedDocError::Arity(_)) | Err(GradedDocError::Graded(_))
    ));
}
