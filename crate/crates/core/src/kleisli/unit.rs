//! The graded unit `A ⇸ SA` and the unit-law witnesses for `⊙`.

use super::{GradedCell, GradedProfunctor, SubstComposite, SubstTuple};
use crate::doctrine::{s_hom, unit_embed, ArityMap, Doctrine, SCategory, Word};
use crate::fincat::FinCategory;
use crate::ids::{ElemId, ObjId};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The unit graded profunctor: its element set at `(𝐛, a)` is the set of
/// arity maps `𝐛 -> (a)`, acting by composition on both sides.  The side
/// table recovers the arity map an element id stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct KleisliUnit {
    pub graded: GradedProfunctor,
    arities: BTreeMap<(Word, ObjId, ElemId), ArityMap>,
}

impl KleisliUnit {
    pub fn arity(&self, w: &Word, a: &ObjId, elem: &ElemId) -> &ArityMap {
        &self.arities[&(w.clone(), a.clone(), elem.clone())]
    }
}

pub fn kleisli_unit(cat: Arc<FinCategory>, d: Doctrine, bound: usize) -> KleisliUnit {
    assert!(bound >= 1, "the unit needs singleton words");
    let words = SCategory::new(cat.clone(), d, bound);
    let mut cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = BTreeMap::new();
    let mut arities: BTreeMap<(Word, ObjId, ElemId), ArityMap> = BTreeMap::new();
    for w in words.words() {
        for a in cat.objects() {
            let maps = s_hom(&cat, d, w, &unit_embed(a));
            if maps.is_empty() {
                continue;
            }
            let mut elems = Vec::with_capacity(maps.len());
            for u in maps {
                let id = ElemId::new(u.name());
                arities.insert((w.clone(), a.clone(), id.clone()), u);
                elems.push(id);
            }
            cells.insert((w.clone(), a.clone()), elems);
        }
    }
    let graded = GradedProfunctor::from_actions_with(
        words,
        cat.clone(),
        cells,
        |h, a, x| {
            let u = &arities[&(h.target.clone(), a.clone(), x.clone())];
            ElemId::new(u.compose(h, &cat).name())
        },
        |w, alpha, x| {
            let m = cat.mor(alpha).unwrap();
            let u = &arities[&(w.clone(), m.src.clone(), x.clone())];
            let post = ArityMap::new(
                d,
                unit_embed(&m.src),
                unit_embed(&m.dst),
                vec![0],
                vec![alpha.clone()],
                &cat,
            )
            .expect("single arrow is an arity map");
            ElemId::new(post.compose(u, &cat).name())
        },
    )
    .expect("unit tables are well formed");
    KleisliUnit { graded, arities }
}

/// For `comp = unit ⊙ f`: the mutually inverse cells `comp ⇒ f` and
/// `f ⇒ comp` realizing the left unit law inside the bound.
pub fn unit_outer_cells(comp: &SubstComposite, unit: &KleisliUnit) -> (GradedCell, GradedCell) {
    assert_eq!(comp.outer, unit.graded, "outer factor is not the unit");
    let f = &comp.inner;
    let d = f.doctrine;
    let b_cat = f.base_target().clone();
    let to = GradedCell::from_fn(&comp.graded, f, |w, a, cls| {
        let t = comp.rep(w, a, cls);
        // β := (u₁ ⊕ … ⊕ uₙ) ∘ ψ : 𝐜 -> 𝐛, then act on x.
        let units = t
            .ys
            .iter()
            .enumerate()
            .map(|(i, y)| unit.arity(&t.blocks[i], &t.mid.letters()[i], y).clone())
            .reduce(|acc, u| acc.juxtapose(&u));
        let glue = units.unwrap_or_else(|| ArityMap::identity(d, Word::empty(), &b_cat));
        let psi = ArityMap::pure(d, w.clone(), glue.source.clone(), t.psi.clone(), &b_cat)
            .expect("stored matching is pure");
        let beta = glue.compose(&psi, &b_cat);
        f.left(&beta, a, &t.x).clone()
    });
    let from = GradedCell::from_fn(f, &comp.graded, |w, a, x| {
        let t = singleton_blocks_tuple(w, x, &b_cat, d);
        comp.class(w, a, &t)
            .expect("unit row tuple is within bound")
            .clone()
    });
    (to, from)
}

/// For `comp = m ⊙ unit`: the mutually inverse cells `comp ⇒ m` and
/// `m ⇒ comp` realizing the right unit law inside the bound.
pub fn unit_inner_cells(comp: &SubstComposite, unit: &KleisliUnit) -> (GradedCell, GradedCell) {
    assert_eq!(comp.inner, unit.graded, "inner factor is not the unit");
    let m = &comp.outer;
    let d = m.doctrine;
    let a_cat = m.source().clone();
    let b_cat = m.base_target().clone();
    let to = GradedCell::from_fn(&comp.graded, m, |w, a, cls| {
        let t = comp.rep(w, a, cls);
        let u = unit.arity(&t.mid, a, &t.x);
        // The unit arity map routes one block through its arrow; the rest
        // of the row is already identified away by the middle moves.
        let i = u.index[0];
        let moved = m.right(&t.blocks[i], &u.arrows[0], &t.ys[i]);
        let offset: usize = t.blocks[..i].iter().map(Word::len).sum();
        let slice: Vec<usize> = t.psi[offset..offset + t.blocks[i].len()].to_vec();
        let pick = ArityMap::pure(d, w.clone(), t.blocks[i].clone(), slice, &b_cat)
            .expect("stored matching is pure");
        m.left(&pick, a, moved).clone()
    });
    let from = GradedCell::from_fn(m, &comp.graded, |w, a, y| {
        let t = SubstTuple {
            mid: unit_embed(a),
            blocks: vec![w.clone()],
            x: ElemId::new(ArityMap::identity(d, unit_embed(a), &a_cat).name()),
            ys: vec![y.clone()],
            psi: (0..w.len()).collect(),
        };
        comp.class(w, a, &t)
            .expect("singleton middle tuple is within bound")
            .clone()
    });
    (to, from)
}

/// The tuple `(𝐜; one singleton block per letter; identity units; id)`.
fn singleton_blocks_tuple(w: &Word, x: &ElemId, cat: &Arc<FinCategory>, d: Doctrine) -> SubstTuple {
    let blocks: Vec<Word> = w.letters().iter().map(|l| unit_embed(l)).collect();
    let ys: Vec<ElemId> = w
        .letters()
        .iter()
        .map(|l| ElemId::new(ArityMap::identity(d, unit_embed(l), cat).name()))
        .collect();
    SubstTuple {
        mid: w.clone(),
        blocks,
        x: x.clone(),
        ys,
        psi: (0..w.len()).collect(),
    }
}
