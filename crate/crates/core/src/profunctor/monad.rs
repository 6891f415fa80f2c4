//! Monads on a category inside the bicategory of profunctors, their Kleisli
//! objects, and the identity-on-objects / fully-faithful factorization.
//!
//! A monad is an endoprofunctor `m: A ⇸ A` with a unit cell
//! `identity_prof(A) ⇒ m` and a multiplication `(m ∘ m) ⇒ m`.  The laws are
//! checked on *raw pairs/triples* rather than coend classes: every class is
//! hit by a raw tuple and both sides of each law factor through classes, so
//! the two formulations agree while the raw one needs no extra canonical
//! bijections.

use super::compose::compose_prof;
use super::{adjunction_monad, identity_prof, CellViolation, ProfCell, Profunctor};
use crate::fincat::{FinCategory, Functor, Mor};
use crate::ids::{ElemId, MorId, ObjId};
use crate::util::esc;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum MonadViolation {
    /// The profunctor is not an endoprofunctor, or a cell has the wrong
    /// boundary profunctors.
    Shape(String),
    UnitCell(CellViolation),
    MultCell(CellViolation),
    /// `mult(unit(β) ⋅ x) ≠ β·x` for `β: b -> b'`, `x ∈ m(b', a)`.
    LeftUnitLaw { beta: MorId, elem: ElemId },
    /// `mult(y ⋅ unit(α)) ≠ α·y` for `y ∈ m(b, a')`, `α: a' -> a`.
    RightUnitLaw { alpha: MorId, elem: ElemId },
    /// The two evaluations of a raw triple `(z, y, x)` differ.
    Associativity {
        at: (ObjId, ObjId),
        triple: (ElemId, ElemId, ElemId),
    },
}

impl fmt::Display for MonadViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadViolation::Shape(s) => write!(out, "shape: {s}"),
            MonadViolation::UnitCell(v) => write!(out, "unit cell: {v}"),
            MonadViolation::MultCell(v) => write!(out, "mult cell: {v}"),
            MonadViolation::LeftUnitLaw { beta, elem } => {
                write!(out, "left unit law fails along {beta} at {elem}")
            }
            MonadViolation::RightUnitLaw { alpha, elem } => {
                write!(out, "right unit law fails along {alpha} at {elem}")
            }
            MonadViolation::Associativity { at, triple } => write!(
                out,
                "associativity fails at ({}, {}) on ({}, {}, {})",
                at.0, at.1, triple.0, triple.1, triple.2
            ),
        }
    }
}

/// Check the monad laws for `(m, unit, mult)`.
///
/// `unit` must go from `identity_prof` on `m`'s category to `m`; `mult`
/// from the composite produced by `compose_prof(&m, &m)` to `m`.  Both
/// cells are validated before the laws are evaluated.
pub fn check_prof_monad(m: &Profunctor, unit: &ProfCell, mult: &ProfCell) -> Vec<MonadViolation> {
    let mut report = Vec::new();
    if m.source != m.target {
        return vec![MonadViolation::Shape(
            "profunctor is not an endoprofunctor".into(),
        )];
    }
    let cat = m.source.clone();
    let hom = identity_prof(cat.clone());
    if unit.source != hom || &unit.target != m {
        return vec![MonadViolation::Shape(
            "unit cell is not identity_prof ⇒ m".into(),
        )];
    }
    let mm = compose_prof(m, m).expect("endo boundaries");
    if mult.source != mm.prof || &mult.target != m {
        return vec![MonadViolation::Shape(
            "mult cell is not (m ∘ m) ⇒ m".into(),
        )];
    }
    report.extend(unit.check().into_iter().map(MonadViolation::UnitCell));
    report.extend(mult.check().into_iter().map(MonadViolation::MultCell));
    if !report.is_empty() {
        return report;
    }

    // Unit laws over raw pairs.  unit(β) ∈ m(b, b') for β: b -> b'.
    for beta in cat.morphisms() {
        for a in cat.objects() {
            for x in m.elems(&beta.dst, a) {
                let unit_beta = unit.apply(&beta.src, &beta.dst, &ElemId::new(beta.id.as_str()));
                let class = mm.class(&beta.src, a, &beta.dst, unit_beta, x);
                if mult.apply(&beta.src, a, class) != m.left(&beta.id, a, x) {
                    report.push(MonadViolation::LeftUnitLaw {
                        beta: beta.id.clone(),
                        elem: x.clone(),
                    });
                }
            }
        }
    }
    for alpha in cat.morphisms() {
        for b in cat.objects() {
            for y in m.elems(b, &alpha.src) {
                let unit_alpha =
                    unit.apply(&alpha.src, &alpha.dst, &ElemId::new(alpha.id.as_str()));
                let class = mm.class(b, &alpha.dst, &alpha.src, y, unit_alpha);
                if mult.apply(b, &alpha.dst, class) != m.right(b, &alpha.id, y) {
                    report.push(MonadViolation::RightUnitLaw {
                        alpha: alpha.id.clone(),
                        elem: y.clone(),
                    });
                }
            }
        }
    }

    // Associativity over raw triples z ∈ m(c, b), y ∈ m(b, b'), x ∈ m(b', a).
    for c in cat.objects() {
        for b in cat.objects() {
            for z in m.elems(c, b) {
                for b2 in cat.objects() {
                    for y in m.elems(b, b2) {
                        for a in cat.objects() {
                            for x in m.elems(b2, a) {
                                let inner_first =
                                    mult.apply(b, a, mm.class(b, a, b2, y, x));
                                let lhs = mult.apply(c, a, mm.class(c, a, b, z, inner_first));
                                let outer_first =
                                    mult.apply(c, b2, mm.class(c, b2, b, z, y));
                                let rhs =
                                    mult.apply(c, a, mm.class(c, a, b2, outer_first, x));
                                if lhs != rhs {
                                    report.push(MonadViolation::Associativity {
                                        at: (c.clone(), a.clone()),
                                        triple: (z.clone(), y.clone(), x.clone()),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    report
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum KleisliError {
    #[error("monad laws fail: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Laws(Vec<MonadViolation>),
}

/// Morphism id of a monad element `x ∈ m(b, a)` seen as an arrow `b -> a`.
fn kleisli_mor_id(b: &ObjId, a: &ObjId, x: &ElemId) -> MorId {
    MorId::new(format!(
        "[{}|{}|{}]",
        esc(b.as_str()),
        esc(a.as_str()),
        esc(x.as_str())
    ))
}

/// The Kleisli object of a monad: same objects as the base category,
/// `hom(b, a) = m(b, a)`, composition by `mult`, identities by `unit`.
/// Returns the category and the canonical functor from the base.
pub fn kleisli_object(
    m: &Profunctor,
    unit: &ProfCell,
    mult: &ProfCell,
) -> Result<(Arc<FinCategory>, Functor), KleisliError> {
    let violations = check_prof_monad(m, unit, mult);
    if !violations.is_empty() {
        return Err(KleisliError::Laws(violations));
    }
    let cat = m.source.clone();
    let mm = compose_prof(m, m).expect("endo boundaries");

    let mut morphisms = Vec::new();
    for ((b, a), elems) in m.cells() {
        for x in elems {
            morphisms.push(Mor {
                id: kleisli_mor_id(b, a, x),
                src: b.clone(),
                dst: a.clone(),
            });
        }
    }
    let identities: Vec<(ObjId, MorId)> = cat
        .objects()
        .iter()
        .map(|o| {
            let e = unit.apply(o, o, &ElemId::new(cat.identity(o).as_str()));
            (o.clone(), kleisli_mor_id(o, o, e))
        })
        .collect();

    // g ∘ f for f: b -> a (f ∈ m(b, a)) and g: a -> c is mult of the class
    // of (a, f, g) in (m ∘ m)(b, c).
    let mut compose = Vec::new();
    for ((b, a), fs) in m.cells() {
        for ((a2, c), gs) in m.cells() {
            if a2 != a {
                continue;
            }
            for f in fs {
                for g in gs {
                    let gf = mult.apply(b, c, mm.class(b, c, a, f, g));
                    compose.push((
                        (kleisli_mor_id(a, c, g), kleisli_mor_id(b, a, f)),
                        kleisli_mor_id(b, c, gf),
                    ));
                }
            }
        }
    }

    let kc = Arc::new(
        FinCategory::new(cat.objects().to_vec(), morphisms, identities, compose)
            .expect("kleisli tables are well formed when the monad laws hold"),
    );
    let object_map = cat.objects().iter().map(|o| (o.clone(), o.clone()));
    let morphism_map = cat.morphisms().iter().map(|mor| {
        let e = unit.apply(&mor.src, &mor.dst, &ElemId::new(mor.id.as_str()));
        (mor.id.clone(), kleisli_mor_id(&mor.src, &mor.dst, e))
    });
    let k = Functor::new(cat.clone(), kc.clone(), object_map, morphism_map)
        .expect("unit images resolve");
    Ok((kc, k))
}

/// Result of [`io_ff_factorize`]: `ff ∘ io = f` with `io` identity on
/// objects and `ff` full and faithful.
#[derive(Debug, Clone)]
pub struct IoFf {
    pub io: Functor,
    pub ff: Functor,
    pub middle: Arc<FinCategory>,
}

impl IoFf {
    /// Violations of the advertised factorization properties; empty on any
    /// lawful input (used by tests, cheap enough to run anywhere).
    pub fn check(&self, f: &Functor) -> Vec<String> {
        let mut report: Vec<String> = Vec::new();
        report.extend(self.io.check().into_iter().map(|v| format!("io: {v}")));
        report.extend(self.ff.check().into_iter().map(|v| format!("ff: {v}")));
        let composite = self.ff.compose(&self.io);
        for o in f.source.objects() {
            if composite.on_obj(o) != f.on_obj(o) {
                report.push(format!("composite differs from f on object {o}"));
            }
        }
        for m in f.source.morphisms() {
            if composite.on_mor(&m.id) != f.on_mor(&m.id) {
                report.push(format!("composite differs from f on morphism {}", m.id));
            }
        }
        for o in f.source.objects() {
            if self.io.on_obj(o) != o {
                report.push(format!("io moves object {o}"));
            }
        }
        // Fullness and faithfulness of ff, per hom-set.
        for b in self.middle.objects() {
            for a in self.middle.objects() {
                let images: Vec<&MorId> = self
                    .middle
                    .hom(b, a)
                    .into_iter()
                    .map(|m| self.ff.on_mor(m))
                    .collect();
                let mut sorted = images.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != images.len() {
                    report.push(format!("ff not faithful on hom({b}, {a})"));
                }
                let target_hom = self
                    .ff
                    .target
                    .hom(self.ff.on_obj(b), self.ff.on_obj(a));
                if sorted.len() != target_hom.len() {
                    report.push(format!("ff not full on hom({b}, {a})"));
                }
            }
        }
        report
    }
}

/// Factor `f` as identity-on-objects followed by full-and-faithful, through
/// the Kleisli object of the monad `costar(f) ∘ star(f)`.
pub fn io_ff_factorize(f: &Functor) -> IoFf {
    let adj = adjunction_monad(f);
    let t = &adj.monad;
    let (middle, io) = kleisli_object(&t.prof, &adj.unit, &adj.mult)
        .expect("the adjunction-induced monad satisfies the laws");

    let b_cat = f.target.clone();
    let object_map = middle.objects().iter().map(|o| (o.clone(), f.on_obj(o).clone()));
    // A middle morphism is a class of (b, y: f src -> b, x: b -> f dst);
    // its image under ff is x ∘ y, which is class-invariant.
    let mut morphism_map: Vec<(MorId, MorId)> = Vec::new();
    for ((a2, a1), elems) in t.prof.cells() {
        for e in elems {
            let (_b, y, x) = t.rep(a2, a1, e);
            let m = b_cat
                .compose(&MorId::new(x.as_str()), &MorId::new(y.as_str()))
                .expect("composable by construction");
            morphism_map.push((kleisli_mor_id(a2, a1, e), m.clone()));
        }
    }
    let ff = Functor::new(middle.clone(), b_cat, object_map, morphism_map)
        .expect("images resolve in the target category");
    IoFf { io, ff, middle }
}

/// Build a monad presentation from a one-object profunctor whose single
/// cell carries a finite monoid: elements are the monoid's, `mult` is the
/// monoid operation, `unit` sends the identity arrow to the monoid unit.
pub fn monoid_monad(
    elements: Vec<ElemId>,
    unit_elem: ElemId,
    op: impl Fn(&ElemId, &ElemId) -> ElemId,
) -> (Profunctor, ProfCell, ProfCell) {
    let pt = Arc::new(FinCategory::discrete([ObjId::new("*")]));
    let star_obj = ObjId::new("*");
    let mut cells = BTreeMap::new();
    cells.insert((star_obj.clone(), star_obj.clone()), elements);
    let m = Profunctor::from_actions(
        pt.clone(),
        pt.clone(),
        cells,
        |_, _, x| x.clone(),
        |_, _, x| x.clone(),
    )
    .expect("single-cell tables are total");
    let unit = ProfCell::from_fn(&identity_prof(pt), &m, |_, _, _| unit_elem.clone());
    let mm = compose_prof(&m, &m).expect("endo boundaries");
    let mult = ProfCell::from_fn(&mm.prof, &m, |b, a, cls| {
        let (_, f, g) = mm.rep(b, a, cls);
        // The pair (f, g) composes in diagram order: f then g.
        op(g, f)
    });
    (m, unit, mult)
}
