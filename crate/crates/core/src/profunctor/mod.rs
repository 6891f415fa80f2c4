//! Profunctors between finite categories, with explicit element sets.
//!
//! A profunctor `M: A ⇸ B` assigns to each pair `(b, a)` with `b` an object
//! of `B` and `a` an object of `A` a finite set of elements `M(b, a)`,
//! contravariant in `b` and covariant in `a`:
//!
//! * the *left* action along `β: b' -> b` in `B` maps `M(b, a) -> M(b', a)`;
//! * the *right* action along `α: a -> a'` in `A` maps `M(b, a) -> M(b, a')`.
//!
//! Both actions are stored as full per-morphism tables.  Functoriality of
//! each action and their commutation are laws, checked by
//! [`Profunctor::validate`]; resolution of ids and totality of the tables
//! are structural and enforced at construction.
//!
//! Composition of profunctors ([`compose_prof`]) is the coend formula: an
//! element of `(N ∘ M)(c, a)` is an equivalence class of triples
//! `(b, y ∈ N(c, b), x ∈ M(b, a))` under the zigzag relation generated by
//! `(y·β, x) ~ (y, β·x)` for `β` a morphism of the middle category.  The
//! quotient is computed by union-find and every class is named by its least
//! member in the global id order, so composites are canonical values.

mod adjoint;
mod compose;
mod elements;
mod json;
mod monad;

pub use adjoint::{
    adjunction_counit, adjunction_monad, check_adjunction, costar, star, AdjunctionMonad,
    AdjunctionViolation,
};
pub use compose::{
    assoc_cells, compose_prof, left_unit_cells, right_unit_cells, whisker_inner, whisker_outer,
    ComposeError, Composite, PairKey, PairTable,
};
pub use elements::{elements_factorization, ElementsFactorization};
pub use json::{ProfDocError, ProfunctorDoc, PROF_SCHEMA};
pub use monad::{
    check_prof_monad, io_ff_factorize, kleisli_object, monoid_monad, IoFf, KleisliError,
    MonadViolation,
};

use crate::fincat::FinCategory;
use crate::ids::{ElemId, MorId, ObjId};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Structural problems in profunctor tables.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ProfDataError {
    #[error("cell ({b}, {a}) references an unknown object")]
    UnknownCell { b: ObjId, a: ObjId },
    #[error("duplicate element {elem} in cell ({b}, {a})")]
    DuplicateElement { b: ObjId, a: ObjId, elem: ElemId },
    #[error("left action table missing for morphism {mor} at object {at}")]
    MissingLeftTable { mor: MorId, at: ObjId },
    #[error("right action table missing at object {at} for morphism {mor}")]
    MissingRightTable { at: ObjId, mor: MorId },
    #[error("action along {mor} misses element {elem}")]
    MissingActionValue { mor: MorId, elem: ElemId },
    #[error("action along {mor} sends {elem} outside the target cell")]
    ActionValueNotInCell { mor: MorId, elem: ElemId },
    #[error("action table along {mor} lists element {elem} not in the source cell")]
    ActionKeyNotInCell { mor: MorId, elem: ElemId },
    #[error("action table keyed by ({key0}, {key1}) matches no morphism/object pair")]
    UnknownTableKey { key0: String, key1: String },
}

/// Law violations reported by [`Profunctor::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ProfViolation {
    /// Action along an identity morphism moves an element.
    IdentityAction { mor: MorId, elem: ElemId },
    /// Left action along `g ∘ f` differs from acting by `g` then `f`.
    LeftFunctoriality { g: MorId, f: MorId, elem: ElemId },
    /// Right action along `g ∘ f` differs from acting by `f` then `g`.
    RightFunctoriality { g: MorId, f: MorId, elem: ElemId },
    /// Left and right actions fail to commute on an element.
    ActionsCommute {
        left: MorId,
        right: MorId,
        elem: ElemId,
    },
}

impl fmt::Display for ProfViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfViolation::IdentityAction { mor, elem } => {
                write!(out, "identity action along {mor} moves {elem}")
            }
            ProfViolation::LeftFunctoriality { g, f, elem } => {
                write!(out, "left action not functorial on ({g}, {f}) at {elem}")
            }
            ProfViolation::RightFunctoriality { g, f, elem } => {
                write!(out, "right action not functorial on ({g}, {f}) at {elem}")
            }
            ProfViolation::ActionsCommute { left, right, elem } => {
                write!(out, "actions along {left} / {right} do not commute at {elem}")
            }
        }
    }
}

/// A profunctor `A ⇸ B` with explicit element sets and action tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    /// `A`: the covariant boundary.
    pub source: Arc<FinCategory>,
    /// `B`: the contravariant boundary.
    pub target: Arc<FinCategory>,
    cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>>,
    /// Keyed by `(β, a)` for `β: b' -> b` in `B`: maps `M(b,a) -> M(b',a)`.
    left: BTreeMap<(MorId, ObjId), BTreeMap<ElemId, ElemId>>,
    /// Keyed by `(b, α)` for `α: a -> a'` in `A`: maps `M(b,a) -> M(b,a')`.
    right: BTreeMap<(ObjId, MorId), BTreeMap<ElemId, ElemId>>,
}

impl Profunctor {
    /// Build from explicit tables; empty cells may simply be omitted.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>>,
        left: BTreeMap<(MorId, ObjId), BTreeMap<ElemId, ElemId>>,
        right: BTreeMap<(ObjId, MorId), BTreeMap<ElemId, ElemId>>,
    ) -> Result<Self, ProfDataError> {
        let mut cells = cells;
        cells.retain(|_, elems| !elems.is_empty());
        for ((b, a), elems) in &mut cells {
            if !target.has_object(b) || !source.has_object(a) {
                return Err(ProfDataError::UnknownCell {
                    b: b.clone(),
                    a: a.clone(),
                });
            }
            elems.sort();
            for pair in elems.windows(2) {
                if pair[0] == pair[1] {
                    return Err(ProfDataError::DuplicateElement {
                        b: b.clone(),
                        a: a.clone(),
                        elem: pair[0].clone(),
                    });
                }
            }
        }

        let mut prof = Profunctor {
            source,
            target,
            cells,
            left,
            right,
        };
        prof.check_shape()?;
        // Canonical form: tables over empty cells are dropped, not stored
        // empty, so structurally equal profunctors compare equal.
        prof.left.retain(|_, t| !t.is_empty());
        prof.right.retain(|_, t| !t.is_empty());
        Ok(prof)
    }

    /// Build by evaluating action closures on every (morphism, element) pair.
    ///
    /// `left_of(β, a, x)` must give the image of `x ∈ M(dst β, a)` in
    /// `M(src β, a)`; `right_of(b, α, x)` the image of `x ∈ M(b, src α)` in
    /// `M(b, dst α)`.
    pub fn from_actions(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>>,
        mut left_of: impl FnMut(&MorId, &ObjId, &ElemId) -> ElemId,
        mut right_of: impl FnMut(&ObjId, &MorId, &ElemId) -> ElemId,
    ) -> Result<Self, ProfDataError> {
        let mut cells = cells;
        cells.retain(|_, elems| !elems.is_empty());
        let mut left = BTreeMap::new();
        for beta in target.morphisms() {
            for a in source.objects() {
                let elems = cells.get(&(beta.dst.clone(), a.clone()));
                let table: BTreeMap<ElemId, ElemId> = elems
                    .into_iter()
                    .flatten()
                    .map(|x| (x.clone(), left_of(&beta.id, a, x)))
                    .collect();
                left.insert((beta.id.clone(), a.clone()), table);
            }
        }
        let mut right = BTreeMap::new();
        for b in target.objects() {
            for alpha in source.morphisms() {
                let elems = cells.get(&(b.clone(), alpha.src.clone()));
                let table: BTreeMap<ElemId, ElemId> = elems
                    .into_iter()
                    .flatten()
                    .map(|x| (x.clone(), right_of(b, &alpha.id, x)))
                    .collect();
                right.insert((b.clone(), alpha.id.clone()), table);
            }
        }
        Profunctor::new(source, target, cells, left, right)
    }

    fn check_shape(&self) -> Result<(), ProfDataError> {
        let empty = BTreeMap::new();
        for beta in self.target.morphisms() {
            for a in self.source.objects() {
                // A table over an empty cell may be omitted entirely.
                let table = match self.left.get(&(beta.id.clone(), a.clone())) {
                    Some(table) => table,
                    None if self.elems(&beta.dst, a).is_empty() => &empty,
                    None => {
                        return Err(ProfDataError::MissingLeftTable {
                            mor: beta.id.clone(),
                            at: a.clone(),
                        })
                    }
                };
                self.check_action_table(&beta.id, table, (&beta.dst, a), (&beta.src, a))?;
            }
        }
        for b in self.target.objects() {
            for alpha in self.source.morphisms() {
                let table = match self.right.get(&(b.clone(), alpha.id.clone())) {
                    Some(table) => table,
                    None if self.elems(b, &alpha.src).is_empty() => &empty,
                    None => {
                        return Err(ProfDataError::MissingRightTable {
                            at: b.clone(),
                            mor: alpha.id.clone(),
                        })
                    }
                };
                self.check_action_table(&alpha.id, table, (b, &alpha.src), (b, &alpha.dst))?;
            }
        }
        for (beta, a) in self.left.keys() {
            if self.target.mor(beta).is_none() || !self.source.has_object(a) {
                return Err(ProfDataError::UnknownTableKey {
                    key0: beta.to_string(),
                    key1: a.to_string(),
                });
            }
        }
        for (b, alpha) in self.right.keys() {
            if !self.target.has_object(b) || self.source.mor(alpha).is_none() {
                return Err(ProfDataError::UnknownTableKey {
                    key0: b.to_string(),
                    key1: alpha.to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_action_table(
        &self,
        mor: &MorId,
        table: &BTreeMap<ElemId, ElemId>,
        from: (&ObjId, &ObjId),
        to: (&ObjId, &ObjId),
    ) -> Result<(), ProfDataError> {
        let from_elems: BTreeSet<&ElemId> = self.elems(from.0, from.1).iter().collect();
        let to_elems: BTreeSet<&ElemId> = self.elems(to.0, to.1).iter().collect();
        for x in &from_elems {
            match table.get(*x) {
                None => {
                    return Err(ProfDataError::MissingActionValue {
                        mor: mor.clone(),
                        elem: (*x).clone(),
                    })
                }
                Some(y) if !to_elems.contains(y) => {
                    return Err(ProfDataError::ActionValueNotInCell {
                        mor: mor.clone(),
                        elem: (*x).clone(),
                    })
                }
                _ => {}
            }
        }
        for x in table.keys() {
            if !from_elems.contains(x) {
                return Err(ProfDataError::ActionKeyNotInCell {
                    mor: mor.clone(),
                    elem: x.clone(),
                });
            }
        }
        Ok(())
    }

    /// Elements of the cell `(b, a)`; missing cells are empty.
    pub fn elems(&self, b: &ObjId, a: &ObjId) -> &[ElemId] {
        self.cells
            .get(&(b.clone(), a.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(ObjId, ObjId), &Vec<ElemId>)> {
        self.cells.iter()
    }

    pub fn total_elements(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    /// Left action: `β: b' -> b` applied to `x ∈ M(b, a)`, giving `M(b', a)`.
    pub fn left(&self, beta: &MorId, a: &ObjId, x: &ElemId) -> &ElemId {
        &self.left[&(beta.clone(), a.clone())][x]
    }

    /// Right action: `α: a -> a'` applied to `x ∈ M(b, a)`, giving `M(b, a')`.
    pub fn right(&self, b: &ObjId, alpha: &MorId, x: &ElemId) -> &ElemId {
        &self.right[&(b.clone(), alpha.clone())][x]
    }

    /// Check action functoriality and commutation; empty report means lawful.
    pub fn validate(&self) -> Vec<ProfViolation> {
        let mut report = Vec::new();

        for ((b, a), elems) in &self.cells {
            let id_b = self.target.identity(b);
            let id_a = self.source.identity(a);
            for x in elems {
                if self.left(id_b, a, x) != x {
                    report.push(ProfViolation::IdentityAction {
                        mor: id_b.clone(),
                        elem: x.clone(),
                    });
                }
                if self.right(b, id_a, x) != x {
                    report.push(ProfViolation::IdentityAction {
                        mor: id_a.clone(),
                        elem: x.clone(),
                    });
                }
            }
        }

        // Left functoriality: composing β1: b0->b1 with β2: b1->b2 must act
        // as "first β2, then β1".
        for ((g, f), gf) in self.target.compose_entries() {
            let b2 = self.target.dst(g);
            for a in self.source.objects() {
                for x in self.elems(b2, a) {
                    let step = self.left(f, a, self.left(g, a, x));
                    if step != self.left(gf, a, x) {
                        report.push(ProfViolation::LeftFunctoriality {
                            g: g.clone(),
                            f: f.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
        }

        for ((g, f), gf) in self.source.compose_entries() {
            let a0 = self.source.src(f);
            for b in self.target.objects() {
                for x in self.elems(b, a0) {
                    let step = self.right(b, g, self.right(b, f, x));
                    if step != self.right(b, gf, x) {
                        report.push(ProfViolation::RightFunctoriality {
                            g: g.clone(),
                            f: f.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
        }

        for beta in self.target.morphisms() {
            for alpha in self.source.morphisms() {
                for x in self.elems(&beta.dst, &alpha.src) {
                    let lr = self.right(&beta.src, &alpha.id, self.left(&beta.id, &alpha.src, x));
                    let rl = self.left(&beta.id, &alpha.dst, self.right(&beta.dst, &alpha.id, x));
                    if lr != rl {
                        report.push(ProfViolation::ActionsCommute {
                            left: beta.id.clone(),
                            right: alpha.id.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
        }

        report
    }

    pub fn is_lawful(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Identity profunctor on `A`: elements of `(b, a)` are the morphisms
/// `b -> a`, with both actions given by composition.
pub fn identity_prof(cat: Arc<FinCategory>) -> Profunctor {
    let mut cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>> = BTreeMap::new();
    for m in cat.morphisms() {
        cells
            .entry((m.src.clone(), m.dst.clone()))
            .or_default()
            .push(ElemId::new(m.id.as_str()));
    }
    let c = cat.clone();
    Profunctor::from_actions(
        cat.clone(),
        cat.clone(),
        cells,
        |beta, _a, x| {
            let e = MorId::new(x.as_str());
            ElemId::new(c.compose(&e, beta).expect("hom table is total").as_str())
        },
        |_b, alpha, x| {
            let e = MorId::new(x.as_str());
            ElemId::new(c.compose(alpha, &e).expect("hom table is total").as_str())
        },
    )
    .expect("hom actions are total and well typed")
}

/// A 2-cell between parallel profunctors: one map per cell, compatible with
/// both actions (checked by [`ProfCell::check`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfCell {
    pub source: Profunctor,
    pub target: Profunctor,
    pub components: BTreeMap<(ObjId, ObjId), BTreeMap<ElemId, ElemId>>,
}

/// Violations reported by [`ProfCell::check`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CellViolation {
    /// Source and target profunctors do not share boundaries.
    BoundaryMismatch,
    /// No value for an element of the source.
    MissingValue { b: ObjId, a: ObjId, elem: ElemId },
    /// Value is not an element of the corresponding target cell.
    ValueNotInCell { b: ObjId, a: ObjId, elem: ElemId },
    /// Component fails to commute with a left action.
    LeftNaturality { mor: MorId, elem: ElemId },
    /// Component fails to commute with a right action.
    RightNaturality { mor: MorId, elem: ElemId },
}

impl fmt::Display for CellViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellViolation::BoundaryMismatch => write!(out, "boundary categories differ"),
            CellViolation::MissingValue { b, a, elem } => {
                write!(out, "no value at ({b}, {a}) for {elem}")
            }
            CellViolation::ValueNotInCell { b, a, elem } => {
                write!(out, "value at ({b}, {a}) for {elem} is not in the target cell")
            }
            CellViolation::LeftNaturality { mor, elem } => {
                write!(out, "left action along {mor} not preserved at {elem}")
            }
            CellViolation::RightNaturality { mor, elem } => {
                write!(out, "right action along {mor} not preserved at {elem}")
            }
        }
    }
}

impl ProfCell {
    /// The identity cell on `m`.
    pub fn identity(m: &Profunctor) -> ProfCell {
        let components = m
            .cells()
            .map(|(key, elems)| {
                (
                    key.clone(),
                    elems.iter().map(|x| (x.clone(), x.clone())).collect(),
                )
            })
            .collect();
        ProfCell {
            source: m.clone(),
            target: m.clone(),
            components,
        }
    }

    /// Build componentwise from a closure on elements of the source.
    pub fn from_fn(
        source: &Profunctor,
        target: &Profunctor,
        mut f: impl FnMut(&ObjId, &ObjId, &ElemId) -> ElemId,
    ) -> ProfCell {
        let components = source
            .cells()
            .map(|((b, a), elems)| {
                (
                    (b.clone(), a.clone()),
                    elems.iter().map(|x| (x.clone(), f(b, a, x))).collect(),
                )
            })
            .collect();
        ProfCell {
            source: source.clone(),
            target: target.clone(),
            components,
        }
    }

    pub fn apply(&self, b: &ObjId, a: &ObjId, x: &ElemId) -> &ElemId {
        &self.components[&(b.clone(), a.clone())][x]
    }

    /// Vertical composition: `other` after `self`.
    pub fn then(&self, other: &ProfCell) -> ProfCell {
        assert_eq!(
            self.target, other.source,
            "vertical composition boundary mismatch"
        );
        ProfCell::from_fn(&self.source, &other.target, |b, a, x| {
            other.apply(b, a, self.apply(b, a, x)).clone()
        })
    }

    pub fn check(&self) -> Vec<CellViolation> {
        let mut report = Vec::new();
        if self.source.source != self.target.source || self.source.target != self.target.target {
            return vec![CellViolation::BoundaryMismatch];
        }
        for ((b, a), elems) in self.source.cells() {
            let table = self.components.get(&(b.clone(), a.clone()));
            let target_elems: BTreeSet<&ElemId> = self.target.elems(b, a).iter().collect();
            for x in elems {
                match table.and_then(|t| t.get(x)) {
                    None => report.push(CellViolation::MissingValue {
                        b: b.clone(),
                        a: a.clone(),
                        elem: x.clone(),
                    }),
                    Some(v) if !target_elems.contains(v) => {
                        report.push(CellViolation::ValueNotInCell {
                            b: b.clone(),
                            a: a.clone(),
                            elem: x.clone(),
                        })
                    }
                    _ => {}
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        let cat_b = &self.source.target;
        let cat_a = &self.source.source;
        for beta in cat_b.morphisms() {
            for a in cat_a.objects() {
                for x in self.source.elems(&beta.dst, a) {
                    let move_then_map = self.apply(&beta.src, a, self.source.left(&beta.id, a, x));
                    let map_then_move =
                        self.target
                            .left(&beta.id, a, self.apply(&beta.dst, a, x));
                    if move_then_map != map_then_move {
                        report.push(CellViolation::LeftNaturality {
                            mor: beta.id.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
        }
        for b in cat_b.objects() {
            for alpha in cat_a.morphisms() {
                for x in self.source.elems(b, &alpha.src) {
                    let move_then_map =
                        self.apply(b, &alpha.dst, self.source.right(b, &alpha.id, x));
                    let map_then_move =
                        self.target
                            .right(b, &alpha.id, self.apply(b, &alpha.src, x));
                    if move_then_map != map_then_move {
                        report.push(CellViolation::RightNaturality {
                            mor: alpha.id.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
        }
        report
    }

    pub fn is_lawful(&self) -> bool {
        self.check().is_empty()
    }

    /// True when every component is a bijection onto the target cell.
    pub fn is_bijective(&self) -> bool {
        self.source.cells().all(|((b, a), elems)| {
            let images: BTreeSet<&ElemId> = elems.iter().map(|x| self.apply(b, a, x)).collect();
            images.len() == elems.len() && images.len() == self.target.elems(b, a).len()
        }) && self
            .target
            .cells()
            .all(|((b, a), elems)| elems.len() == self.source.elems(b, a).len())
    }

    /// Check that `self` and `other` are mutually inverse.
    pub fn is_inverse_of(&self, other: &ProfCell) -> bool {
        self.source == other.target
            && self.target == other.source
            && self.source.cells().all(|((b, a), elems)| {
                elems
                    .iter()
                    .all(|x| other.apply(b, a, self.apply(b, a, x)) == x)
            })
            && other.source.cells().all(|((b, a), elems)| {
                elems
                    .iter()
                    .all(|x| self.apply(b, a, other.apply(b, a, x)) == x)
            })
    }
}

#[cfg(test)]
mod tests;
