//! The category of elements of a profunctor and the induced factorization
//! through representables.
//!
//! For `m: A ⇸ B`, the category `E(m)` has one object per element
//! `x ∈ m(b, a)` and a morphism `(β: b -> b', α: a -> a')` from
//! `(b, a, x)` to `(b', a', x')` exactly when `β·x' = α·x` (left action of
//! `β` on `x'` equals right action of `α` on `x`).  Projections
//! `p: E(m) -> A` and `q: E(m) -> B` pick out `α`/`a` and `β`/`b`, and the
//! composite `star(q) ∘ costar(p)` is canonically isomorphic to `m` — the
//! two inverse cells are returned and can be checked elementwise.
//!
//! The orientation of `E(m)` morphisms (the source element sits at the
//! lower end of both component arrows) is exactly what makes the forward
//! map `x ↦ [(b, a, x), id_b, id_a]` compatible with both actions; a
//! regression test locks it.

use super::compose::{compose_prof, Composite};
use super::{costar, star, ProfCell, Profunctor};
use crate::fincat::{FinCategory, Functor, Mor};
use crate::ids::{ElemId, MorId, ObjId};
use crate::util::esc;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct ElementsFactorization {
    /// The category of elements `E(m)`.
    pub category: Arc<FinCategory>,
    /// Projection to the covariant boundary `A`.
    pub p: Functor,
    /// Projection to the contravariant boundary `B`.
    pub q: Functor,
    /// `star(q) ∘ costar(p)` with its coend presentation.
    pub composite: Composite,
    /// `m ⇒ composite.prof`.
    pub to_composite: ProfCell,
    /// `composite.prof ⇒ m`; mutually inverse with `to_composite`.
    pub from_composite: ProfCell,
    coords: BTreeMap<ObjId, (ObjId, ObjId, ElemId)>,
}

impl ElementsFactorization {
    /// The `(b, a, x)` triple an object of `E(m)` stands for.
    pub fn coord(&self, e: &ObjId) -> &(ObjId, ObjId, ElemId) {
        &self.coords[e]
    }

    /// The object of `E(m)` standing for `x ∈ m(b, a)`.
    pub fn object(&self, b: &ObjId, a: &ObjId, x: &ElemId) -> ObjId {
        let o = elem_obj_id(b, a, x);
        debug_assert!(self.coords.contains_key(&o));
        o
    }
}

fn elem_obj_id(b: &ObjId, a: &ObjId, x: &ElemId) -> ObjId {
    ObjId::new(format!(
        "<{}|{}|{}>",
        esc(b.as_str()),
        esc(a.as_str()),
        esc(x.as_str())
    ))
}

fn elem_mor_id(beta: &MorId, alpha: &MorId, src: &ObjId, dst: &ObjId) -> MorId {
    MorId::new(format!(
        "({}|{}|{}|{})",
        esc(beta.as_str()),
        esc(alpha.as_str()),
        esc(src.as_str()),
        esc(dst.as_str())
    ))
}

pub fn elements_factorization(m: &Profunctor) -> ElementsFactorization {
    let cat_a = m.source.clone();
    let cat_b = m.target.clone();

    let mut objects = Vec::new();
    let mut coords: BTreeMap<ObjId, (ObjId, ObjId, ElemId)> = BTreeMap::new();
    for ((b, a), elems) in m.cells() {
        for x in elems {
            let o = elem_obj_id(b, a, x);
            objects.push(o.clone());
            coords.insert(o, (b.clone(), a.clone(), x.clone()));
        }
    }

    let mut morphisms = Vec::new();
    let mut components: BTreeMap<MorId, (MorId, MorId)> = BTreeMap::new();
    let mut by_parts: BTreeMap<(MorId, MorId, ObjId, ObjId), MorId> = BTreeMap::new();
    for beta in cat_b.morphisms() {
        for alpha in cat_a.morphisms() {
            for x0 in m.elems(&beta.src, &alpha.src) {
                for x1 in m.elems(&beta.dst, &alpha.dst) {
                    if m.left(&beta.id, &alpha.dst, x1) != m.right(&beta.src, &alpha.id, x0) {
                        continue;
                    }
                    let src = elem_obj_id(&beta.src, &alpha.src, x0);
                    let dst = elem_obj_id(&beta.dst, &alpha.dst, x1);
                    let id = elem_mor_id(&beta.id, &alpha.id, &src, &dst);
                    morphisms.push(Mor {
                        id: id.clone(),
                        src: src.clone(),
                        dst: dst.clone(),
                    });
                    components.insert(id.clone(), (beta.id.clone(), alpha.id.clone()));
                    by_parts.insert((beta.id.clone(), alpha.id.clone(), src, dst), id);
                }
            }
        }
    }

    let identities: Vec<(ObjId, MorId)> = coords
        .iter()
        .map(|(o, (b, a, _))| {
            (
                o.clone(),
                elem_mor_id(cat_b.identity(b), cat_a.identity(a), o, o),
            )
        })
        .collect();

    // Componentwise composition.  The compatibility condition is closed
    // under it, so the composite pair is always present in `by_parts`.
    let mut compose = Vec::new();
    for g in &morphisms {
        for f in &morphisms {
            if f.dst != g.src {
                continue;
            }
            let (gb, ga) = &components[&g.id];
            let (fb, fa) = &components[&f.id];
            let cb = cat_b.compose(gb, fb).expect("component composable");
            let ca = cat_a.compose(ga, fa).expect("component composable");
            let gf = by_parts[&(cb.clone(), ca.clone(), f.src.clone(), g.dst.clone())].clone();
            compose.push(((g.id.clone(), f.id.clone()), gf));
        }
    }

    let category = Arc::new(
        FinCategory::new(objects, morphisms, identities, compose)
            .expect("element category tables are well formed"),
    );

    let p = Functor::new(
        category.clone(),
        cat_a.clone(),
        coords.iter().map(|(o, (_, a, _))| (o.clone(), a.clone())),
        components
            .iter()
            .map(|(id, (_, alpha))| (id.clone(), alpha.clone())),
    )
    .expect("projection images resolve");
    let q = Functor::new(
        category.clone(),
        cat_b.clone(),
        coords.iter().map(|(o, (b, _, _))| (o.clone(), b.clone())),
        components
            .iter()
            .map(|(id, (beta, _))| (id.clone(), beta.clone())),
    )
    .expect("projection images resolve");

    let composite = compose_prof(&star(&q), &costar(&p)).expect("shared middle category");

    let to_composite = ProfCell::from_fn(m, &composite.prof, |b, a, x| {
        let e = elem_obj_id(b, a, x);
        let idb = ElemId::new(cat_b.identity(b).as_str());
        let ida = ElemId::new(cat_a.identity(a).as_str());
        composite.class(b, a, &e, &idb, &ida).clone()
    });
    let from_composite = ProfCell::from_fn(&composite.prof, m, |b, a, cls| {
        // Representative (e = <b0|a0|x0>, y: b -> b0 in B, x: a0 -> a in A)
        // maps to x · (y · x0): act left by y, then right by x.
        let (e, y, x) = composite.rep(b, a, cls);
        let (_, a0, x0) = &coords[e];
        let moved = m.left(&MorId::new(y.as_str()), a0, x0);
        m.right(b, &MorId::new(x.as_str()), moved).clone()
    });

    ElementsFactorization {
        category,
        p,
        q,
        composite,
        to_composite,
        from_composite,
        coords,
    }
}
