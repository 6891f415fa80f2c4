//! Coend composition of profunctors and its canonical structure cells.
//!
//! For `outer: B ⇸ C` and `inner: A ⇸ B` the composite at `(c, a)` is the
//! set of equivalence classes of triples `(b, y ∈ outer(c, b),
//! x ∈ inner(b, a))`, where for every `β: b -> b'` of the middle category
//! the triples `(b', β·y, x)` and `(b, y, x·β)` are identified.  The
//! quotient is a plain union-find closure; the class representative is the
//! least triple under the `(ObjId, ElemId, ElemId)` order and names the
//! class.  Because representatives are canonical, "equal up to the coend
//! relation" is literal equality of class ids, and the unit / associativity
//! isomorphisms of composition become checkable bijections on elements.

use super::{ProfCell, Profunctor};
use crate::ids::{ElemId, ObjId};
use crate::util::UnionFind;
use std::collections::BTreeMap;

/// A triple `(middle object, outer element, inner element)`.
pub type PairKey = (ObjId, ElemId, ElemId);

/// The coend presentation of one composite cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    pub class_of: BTreeMap<PairKey, ElemId>,
    pub rep_of: BTreeMap<ElemId, PairKey>,
}

/// A composed profunctor together with its coend presentation.
///
/// `prof` is the composite `inner.source ⇸ outer.target`; `pairs` maps each
/// `(c, a)` cell to the full triple-to-class table so that structure cells
/// (units, associators, whiskerings) can be computed on representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composite {
    pub outer: Profunctor,
    pub inner: Profunctor,
    pub prof: Profunctor,
    pairs: BTreeMap<(ObjId, ObjId), PairTable>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ComposeError {
    #[error("boundary mismatch: inner profunctor targets a different category than the outer profunctor's source")]
    BoundaryMismatch,
}

impl Composite {
    /// The class of the triple `(b, y, x)` in the cell `(c, a)`.
    pub fn class(&self, c: &ObjId, a: &ObjId, b: &ObjId, y: &ElemId, x: &ElemId) -> &ElemId {
        &self.pairs[&(c.clone(), a.clone())].class_of[&(b.clone(), y.clone(), x.clone())]
    }

    /// The canonical representative triple of a class in the cell `(c, a)`.
    pub fn rep(&self, c: &ObjId, a: &ObjId, class: &ElemId) -> &PairKey {
        &self.pairs[&(c.clone(), a.clone())].rep_of[class]
    }

    pub fn pair_table(&self, c: &ObjId, a: &ObjId) -> Option<&PairTable> {
        self.pairs.get(&(c.clone(), a.clone()))
    }
}

fn class_name(rep: &PairKey) -> ElemId {
    ElemId::new(format!(
        "[{}|{}|{}]",
        crate::util::esc(rep.0.as_str()),
        crate::util::esc(rep.1.as_str()),
        crate::util::esc(rep.2.as_str()),
    ))
}

/// Compose `outer ∘ inner` by the coend over the shared middle category.
pub fn compose_prof(outer: &Profunctor, inner: &Profunctor) -> Result<Composite, ComposeError> {
    if outer.source != inner.target {
        return Err(ComposeError::BoundaryMismatch);
    }
    let middle = outer.source.clone();
    let source = inner.source.clone();
    let target = outer.target.clone();

    let mut pairs: BTreeMap<(ObjId, ObjId), PairTable> = BTreeMap::new();
    let mut cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>> = BTreeMap::new();

    for c in target.objects() {
        for a in source.objects() {
            // Sorted node list: the least index in a class is its canonical
            // representative.
            let mut nodes: Vec<PairKey> = Vec::new();
            for b in middle.objects() {
                for y in outer.elems(c, b) {
                    for x in inner.elems(b, a) {
                        nodes.push((b.clone(), y.clone(), x.clone()));
                    }
                }
            }
            if nodes.is_empty() {
                continue;
            }
            let index: BTreeMap<&PairKey, usize> =
                nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();

            let mut uf = UnionFind::new(nodes.len());
            for beta in middle.morphisms() {
                for y in outer.elems(c, &beta.src) {
                    for x in inner.elems(&beta.dst, a) {
                        let moved_out = (
                            beta.dst.clone(),
                            outer.right(c, &beta.id, y).clone(),
                            x.clone(),
                        );
                        let moved_in = (
                            beta.src.clone(),
                            y.clone(),
                            inner.left(&beta.id, a, x).clone(),
                        );
                        uf.union(index[&moved_out], index[&moved_in]);
                    }
                }
            }

            let mut rep_index: BTreeMap<usize, usize> = BTreeMap::new();
            for i in 0..nodes.len() {
                let root = uf.find(i);
                let slot = rep_index.entry(root).or_insert(i);
                *slot = (*slot).min(i);
            }
            let mut class_of = BTreeMap::new();
            let mut rep_of = BTreeMap::new();
            for (i, node) in nodes.iter().enumerate() {
                let rep = &nodes[rep_index[&uf.find(i)]];
                let name = class_name(rep);
                if i == rep_index[&uf.find(i)] {
                    rep_of.insert(name.clone(), rep.clone());
                }
                class_of.insert(node.clone(), name);
            }
            let mut elems: Vec<ElemId> = rep_of.keys().cloned().collect();
            elems.sort();
            cells.insert((c.clone(), a.clone()), elems);
            pairs.insert((c.clone(), a.clone()), PairTable { class_of, rep_of });
        }
    }

    // Actions act on the canonical representative and re-canonicalize.
    let prof = Profunctor::from_actions(
        source,
        target,
        cells,
        |gamma, a, class| {
            let c = outer.target.dst(gamma);
            let c2 = outer.target.src(gamma);
            let (b, y, x) = pairs[&(c.clone(), a.clone())].rep_of[class].clone();
            let y2 = outer.left(gamma, &b, &y).clone();
            pairs[&(c2.clone(), a.clone())].class_of[&(b, y2, x)].clone()
        },
        |c, alpha, class| {
            let a = inner.source.src(alpha);
            let a2 = inner.source.dst(alpha);
            let (b, y, x) = pairs[&(c.clone(), a.clone())].rep_of[class].clone();
            let x2 = inner.right(&b, alpha, &x).clone();
            pairs[&(c.clone(), a2.clone())].class_of[&(b, y, x2)].clone()
        },
    )
    .expect("coend cells and actions are total by construction");

    Ok(Composite {
        outer: outer.clone(),
        inner: inner.clone(),
        prof,
        pairs,
    })
}

/// The unit isomorphism `I_B ∘ m ≅ m` for `comp = compose_prof(&identity_prof(B), &m)`.
///
/// Returns `(to, from)`: `to` collapses a class with representative
/// `(b, y: b' -> b, x)` to `y·x`, `from` embeds `x ∈ m(b', a)` as the class
/// of `(b', id_{b'}, x)`.  The pair is mutually inverse on lawful input.
pub fn left_unit_cells(comp: &Composite) -> (ProfCell, ProfCell) {
    let m = &comp.inner;
    let hom = &comp.outer;
    let cat_b = hom.target.clone();
    let to = ProfCell::from_fn(&comp.prof, m, |b2, a, class| {
        let (_, y, x) = comp.rep(b2, a, class);
        let y_mor = crate::ids::MorId::new(y.as_str());
        m.left(&y_mor, a, x).clone()
    });
    let from = ProfCell::from_fn(m, &comp.prof, |b2, a, x| {
        let id_elem = ElemId::new(cat_b.identity(b2).as_str());
        comp.class(b2, a, b2, &id_elem, x).clone()
    });
    (to, from)
}

/// The unit isomorphism `m ∘ I_A ≅ m` for `comp = compose_prof(&m, &identity_prof(A))`.
pub fn right_unit_cells(comp: &Composite) -> (ProfCell, ProfCell) {
    let m = &comp.outer;
    let hom = &comp.inner;
    let cat_a = hom.source.clone();
    let to = ProfCell::from_fn(&comp.prof, m, |b, a2, class| {
        let (_, y, x) = comp.rep(b, a2, class);
        let x_mor = crate::ids::MorId::new(x.as_str());
        m.right(b, &x_mor, y).clone()
    });
    let from = ProfCell::from_fn(m, &comp.prof, |b, a2, y| {
        let id_elem = ElemId::new(cat_a.identity(a2).as_str());
        comp.class(b, a2, a2, y, &id_elem).clone()
    });
    (to, from)
}

/// The associativity isomorphism between the two bracketings of
/// `p ∘ n ∘ m`, computed on canonical representatives.
///
/// Arguments are the four composites involved: `pn = p∘n`,
/// `pn_m = (p∘n)∘m`, `nm = n∘m`, `p_nm = p∘(n∘m)`.  Returns
/// `(to_right, to_left)` with `to_right: (p∘n)∘m ⇒ p∘(n∘m)`.
pub fn assoc_cells(
    pn: &Composite,
    pn_m: &Composite,
    nm: &Composite,
    p_nm: &Composite,
) -> (ProfCell, ProfCell) {
    let to_right = ProfCell::from_fn(&pn_m.prof, &p_nm.prof, |d, a, class| {
        let (b, w, x) = pn_m.rep(d, a, class);
        let (c, z, y) = pn.rep(d, b, w);
        let v = nm.class(c, a, b, y, x);
        p_nm.class(d, a, c, z, v).clone()
    });
    let to_left = ProfCell::from_fn(&p_nm.prof, &pn_m.prof, |d, a, class| {
        let (c, z, v) = p_nm.rep(d, a, class);
        let (b, y, x) = nm.rep(c, a, v);
        let w = pn.class(d, b, c, z, y);
        pn_m.class(d, a, b, w, x).clone()
    });
    (to_right, to_left)
}

/// Whisker a cell `theta: m ⇒ m'` with a fixed outer profunctor:
/// `from = n∘m`, `to = n∘m'` gives the cell `n ∘ theta`.
pub fn whisker_inner(from: &Composite, to: &Composite, theta: &ProfCell) -> ProfCell {
    assert_eq!(from.outer, to.outer, "whisker_inner: outer factors differ");
    assert_eq!(theta.source, from.inner, "whisker_inner: cell source is not the inner factor");
    assert_eq!(theta.target, to.inner, "whisker_inner: cell target is not the inner factor");
    ProfCell::from_fn(&from.prof, &to.prof, |c, a, class| {
        let (b, y, x) = from.rep(c, a, class);
        to.class(c, a, b, y, theta.apply(b, a, x)).clone()
    })
}

/// Whisker a cell `theta: n ⇒ n'` with a fixed inner profunctor:
/// `from = n∘m`, `to = n'∘m` gives the cell `theta ∘ m`.
pub fn whisker_outer(from: &Composite, to: &Composite, theta: &ProfCell) -> ProfCell {
    assert_eq!(from.inner, to.inner, "whisker_outer: inner factors differ");
    assert_eq!(theta.source, from.outer, "whisker_outer: cell source is not the outer factor");
    assert_eq!(theta.target, to.outer, "whisker_outer: cell target is not the outer factor");
    ProfCell::from_fn(&from.prof, &to.prof, |c, a, class| {
        let (b, y, x) = from.rep(c, a, class);
        to.class(c, a, b, theta.apply(c, b, y), x).clone()
    })
}
