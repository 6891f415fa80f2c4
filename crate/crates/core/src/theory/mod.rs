//! Theories as monoids for `⊙`: operads, symmetric operads, and clones
//! under one roof.
//!
//! A [`Multicategory`] is a graded profunctor `M: A ⇸ SA` together with
//! unit and substitution 2-cells.  [`check_theory`] verifies the monoid
//! laws pointwise on tuple representatives.  The substitution cell is
//! allowed to be partial — doctrine changes (see the `compare` module)
//! produce theories whose substitution overflows the word bound on some
//! inputs — and every law is checked on the entries that exist.
//!
//! The unit is always total, and a normal theory has bijective unit
//! components at singleton words: `hom_A(b, a) ≅ M((b), a)`.  Normality
//! is part of the definition here; the flag [`Multicategory::require_normal`]
//! exists so that non-normal data (clones with dropped constants, say)
//! can still be loaded and diagnosed.

use crate::doctrine::{unit_embed, ArityMap, Doctrine, Word};
use crate::fincat::FinCategory;
use crate::ids::{ElemId, ObjId};
use crate::kleisli::{
    assoc_witness, kleisli_unit, subst_compose, unit_inner_cells, unit_outer_cells, GradedCell,
    GradedProfunctor, KleisliUnit, SubstComposite, SubstError, SubstTuple,
};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

mod algebra;
mod clone;
mod json;
mod map;
mod monad;

pub use algebra::{endomorphism_theory, AlgebraViolation, FiniteAlgebra, Structure};
pub use clone::{clone_of_algebra, set_clone, OpTable};
pub(crate) use clone::single_sort;
pub use json::{ElementEntry, SubstEntry, TheoryDoc, TheoryDocError, UnitEntry, THEORY_SCHEMA};
pub use map::{
    check_model, check_theory_cell, check_theory_map, enumerate_functors, enumerate_models,
    enumerate_theory_maps, identity_theory_map, MapViolation, TheoryCell, TheoryMap,
};
pub use monad::{induced_monad_on_set, InducedMonad, MonadElem, MonadViolation};

/// A monoid for the substitution product: carrier `M: A ⇸ SA`, a unit
/// cell out of the graded unit, and a (possibly partial) substitution
/// cell out of `M ⊙ M`.
#[derive(Debug, Clone)]
pub struct Multicategory {
    pub carrier: GradedProfunctor,
    pub unit: GradedCell,
    pub subst: GradedCell,
    /// When set, [`check_theory`] also demands bijective unit components
    /// at singleton words.
    pub require_normal: bool,
    units: KleisliUnit,
    pairs: SubstComposite,
}

impl Multicategory {
    /// Assemble from a carrier and assignment closures.  `unit_of` sees
    /// each arity map `𝐛 -> (a)`; `subst_of` sees each canonical tuple
    /// representative of `M ⊙ M` and may decline (partial substitution).
    pub fn from_tables(
        carrier: GradedProfunctor,
        mut unit_of: impl FnMut(&Word, &ObjId, &ArityMap) -> ElemId,
        mut subst_of: impl FnMut(&Word, &ObjId, &SubstTuple) -> Option<ElemId>,
        require_normal: bool,
    ) -> Result<Multicategory, SubstError> {
        let units = kleisli_unit(carrier.source().clone(), carrier.doctrine, carrier.bound);
        let pairs = subst_compose(&carrier, &carrier)?;
        let unit = GradedCell::from_fn(&units.graded, &carrier, |w, a, x| {
            unit_of(w, a, units.arity(w, a, x))
        });
        let mut components: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>> = BTreeMap::new();
        for (w, a, table) in pairs.cells() {
            let mut column = BTreeMap::new();
            for (cls, rep) in &table.rep_of {
                if let Some(value) = subst_of(w, a, rep) {
                    column.insert(cls.clone(), value);
                }
            }
            components.insert((w.clone(), a.clone()), column);
        }
        let subst = GradedCell {
            source: pairs.graded.clone(),
            target: carrier.clone(),
            components,
        };
        Ok(Multicategory {
            carrier,
            unit,
            subst,
            require_normal,
            units,
            pairs,
        })
    }

    pub fn doctrine(&self) -> Doctrine {
        self.carrier.doctrine
    }

    pub fn bound(&self) -> usize {
        self.carrier.bound
    }

    pub fn sorts(&self) -> &Arc<FinCategory> {
        self.carrier.source()
    }

    /// The graded unit the unit cell is based on, with its arity table.
    pub fn units(&self) -> &KleisliUnit {
        &self.units
    }

    /// The substitution composite `M ⊙ M` the subst cell is based on.
    pub fn pairs(&self) -> &SubstComposite {
        &self.pairs
    }

    pub fn elems(&self, w: &Word, a: &ObjId) -> &[ElemId] {
        self.carrier.elems(w, a)
    }

    /// The unit element assigned to an arity map `u: 𝐛 -> (a)`.
    pub fn unit_elem(&self, u: &ArityMap, a: &ObjId) -> &ElemId {
        self.unit
            .apply(&u.source, a, &ElemId::new(u.name()))
    }

    /// The identity element at a sort: the unit at `id: (a) -> (a)`.
    pub fn unit_at(&self, a: &ObjId) -> &ElemId {
        let u = ArityMap::identity(self.doctrine(), unit_embed(a), self.sorts());
        self.unit_elem(&u, a)
    }

    /// Substitute a normal-form (pure-matching) tuple; `None` when the
    /// tuple's class is outside the bound or the entry is not defined.
    pub fn subst_tuple(&self, w: &Word, a: &ObjId, t: &SubstTuple) -> Option<&ElemId> {
        let class = self.pairs.class(w, a, t)?;
        cell_value(&self.subst, w, a, class)
    }

    /// Substitute blocks in order: `x(y₁, …, yₙ)` with the identity
    /// matching, at the concatenated word.
    pub fn subst_entry(
        &self,
        mid: &Word,
        a: &ObjId,
        x: &ElemId,
        blocks: &[Word],
        ys: &[ElemId],
    ) -> Option<&ElemId> {
        let w = blocks
            .iter()
            .fold(Word::empty(), |acc, b| acc.concat(b));
        let t = SubstTuple {
            mid: mid.clone(),
            blocks: blocks.to_vec(),
            x: x.clone(),
            ys: ys.to_vec(),
            psi: (0..w.len()).collect(),
        };
        self.subst_tuple(&w, a, &t)
    }
}

/// Partial-cell lookup: `None` when the component has no entry.
pub(crate) fn cell_value<'c>(
    cell: &'c GradedCell,
    w: &Word,
    a: &ObjId,
    x: &ElemId,
) -> Option<&'c ElemId> {
    cell.components.get(&(w.clone(), a.clone()))?.get(x)
}

/// Violations reported by [`check_theory`]; each names the cell and
/// element it was found at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryViolation {
    /// The unit cell is not `kleisli_unit(A) ⇒ carrier`.
    UnitBoundary,
    /// The subst cell is not `carrier ⊙ carrier ⇒ carrier`.
    SubstBoundary,
    /// The unit cell has no value for a unit element.
    UnitMissing { word: Word, sort: ObjId, elem: ElemId },
    /// A cell value lands outside its target cell.
    ValueNotInCell { which: &'static str, word: Word, sort: ObjId, elem: ElemId },
    /// A cell entry breaks naturality in the word variable.
    LeftNaturality { which: &'static str, word: Word, sort: ObjId, elem: ElemId },
    /// A cell entry breaks naturality in the sort variable.
    RightNaturality { which: &'static str, word: Word, sort: ObjId, elem: ElemId },
    /// `μ ∘ (η ⊙ 1) ≠ λ` at the named class.
    LeftUnit { word: Word, sort: ObjId, class: ElemId },
    /// `μ ∘ (1 ⊙ η) ≠ ρ` at the named class.
    RightUnit { word: Word, sort: ObjId, class: ElemId },
    /// The two triple-substitution paths disagree at the named class.
    Associativity { word: Word, sort: ObjId, class: ElemId },
    /// The unit component at `((b), a)` is not a bijection.
    NotNormal { input: ObjId, output: ObjId },
}

impl fmt::Display for TheoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TheoryViolation::*;
        match self {
            UnitBoundary => write!(out, "unit cell has the wrong boundary"),
            SubstBoundary => write!(out, "substitution cell has the wrong boundary"),
            UnitMissing { word, sort, elem } => {
                write!(out, "unit has no value at ({word}, {sort}) for {elem}")
            }
            ValueNotInCell { which, word, sort, elem } => {
                write!(out, "{which} value at ({word}, {sort}) for {elem} is not in the carrier cell")
            }
            LeftNaturality { which, word, sort, elem } => {
                write!(out, "{which} breaks word naturality at ({word}, {sort}) on {elem}")
            }
            RightNaturality { which, word, sort, elem } => {
                write!(out, "{which} breaks sort naturality at ({word}, {sort}) on {elem}")
            }
            LeftUnit { word, sort, class } => {
                write!(out, "left unit law fails at ({word}, {sort}) on {class}")
            }
            RightUnit { word, sort, class } => {
                write!(out, "right unit law fails at ({word}, {sort}) on {class}")
            }
            Associativity { word, sort, class } => {
                write!(out, "associativity fails at ({word}, {sort}) on {class}")
            }
            NotNormal { input, output } => {
                write!(out, "unit is not bijective onto the unary part at ({input}, {output})")
            }
        }
    }
}

/// Naturality of a possibly-partial graded cell, checked on the squares
/// whose corners all exist.  Values must always land in the target cell.
fn check_cell_where_defined(cell: &GradedCell, which: &'static str) -> Vec<TheoryViolation> {
    let mut report = Vec::new();
    let words = &cell.source.words;
    let sorts = cell.source.source().clone();
    for ((w, a), column) in &cell.components {
        for (x, y) in column {
            if !cell.target.elems(w, a).contains(y) {
                report.push(TheoryViolation::ValueNotInCell {
                    which,
                    word: w.clone(),
                    sort: a.clone(),
                    elem: x.clone(),
                });
                continue;
            }
            for h in words.arities_into(w) {
                let moved = cell.source.left(h, a, x);
                if let Some(image) = cell_value(cell, &h.source, a, moved) {
                    if image != cell.target.left(h, a, y) {
                        report.push(TheoryViolation::LeftNaturality {
                            which,
                            word: w.clone(),
                            sort: a.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
            for alpha in sorts.morphisms() {
                if alpha.src != *a {
                    continue;
                }
                let moved = cell.source.right(w, &alpha.id, x);
                if let Some(image) = cell_value(cell, w, &alpha.dst, moved) {
                    if image != cell.target.right(w, &alpha.id, y) {
                        report.push(TheoryViolation::RightNaturality {
                            which,
                            word: w.clone(),
                            sort: a.clone(),
                            elem: x.clone(),
                        });
                    }
                }
            }
        }
    }
    report
}

/// Monoid laws and normality.  Substitution entries may be missing;
/// every law instance whose participating entries all exist is checked,
/// and instances touching a missing entry are skipped.
pub fn check_theory(m: &Multicategory) -> Vec<TheoryViolation> {
    let mut report = Vec::new();
    if m.unit.source != m.units.graded || m.unit.target != m.carrier {
        report.push(TheoryViolation::UnitBoundary);
    }
    if m.subst.source != m.pairs.graded || m.subst.target != m.carrier {
        report.push(TheoryViolation::SubstBoundary);
    }
    if !report.is_empty() {
        return report;
    }

    // Unit must be total on top of natural.
    for (w, a, elems) in m.units.graded.cells() {
        for x in elems {
            if cell_value(&m.unit, w, a, x).is_none() {
                report.push(TheoryViolation::UnitMissing {
                    word: w.clone(),
                    sort: a.clone(),
                    elem: x.clone(),
                });
            }
        }
    }
    report.extend(check_cell_where_defined(&m.unit, "unit"));
    report.extend(check_cell_where_defined(&m.subst, "substitution"));
    if !report.is_empty() {
        // Law checks below read through these cells; report the
        // structural problems first rather than derived noise.
        return report;
    }

    check_unit_laws(m, &mut report);
    check_associativity(m, &mut report);

    if m.require_normal {
        check_normality(m, &mut report);
    }
    report
}

pub fn is_lawful_theory(m: &Multicategory) -> bool {
    check_theory(m).is_empty()
}

fn check_unit_laws(m: &Multicategory, report: &mut Vec<TheoryViolation>) {
    // Left: J ⊙ M ⇒ M ⊙ M ⇒ M against the canonical iso.
    let outer = subst_compose(&m.units.graded, &m.carrier)
        .expect("unit and carrier share boundaries");
    let (canon, _) = unit_outer_cells(&outer, &m.units);
    for (w, a, table) in outer.cells() {
        for (cls, t) in &table.rep_of {
            let mut ys = Vec::with_capacity(t.ys.len());
            for (i, y) in t.ys.iter().enumerate() {
                match cell_value(&m.unit, &t.blocks[i], &t.mid.letters()[i], y) {
                    Some(v) => ys.push(v.clone()),
                    None => unreachable!("unit totality was checked"),
                }
            }
            let image = SubstTuple {
                mid: t.mid.clone(),
                blocks: t.blocks.clone(),
                x: t.x.clone(),
                ys,
                psi: t.psi.clone(),
            };
            let Some(pair) = m.pairs.class(w, a, &image) else {
                report.push(TheoryViolation::LeftUnit {
                    word: w.clone(),
                    sort: a.clone(),
                    class: cls.clone(),
                });
                continue;
            };
            if let Some(value) = cell_value(&m.subst, w, a, pair) {
                if value != canon.apply(w, a, cls) {
                    report.push(TheoryViolation::LeftUnit {
                        word: w.clone(),
                        sort: a.clone(),
                        class: cls.clone(),
                    });
                }
            }
        }
    }

    // Right: M ⊙ J ⇒ M ⊙ M ⇒ M against the canonical iso.
    let inner = subst_compose(&m.carrier, &m.units.graded)
        .expect("carrier and unit share boundaries");
    let (canon, _) = unit_inner_cells(&inner, &m.units);
    for (w, a, table) in inner.cells() {
        for (cls, t) in &table.rep_of {
            let x = cell_value(&m.unit, &t.mid, a, &t.x)
                .expect("unit totality was checked")
                .clone();
            let image = SubstTuple {
                mid: t.mid.clone(),
                blocks: t.blocks.clone(),
                x,
                ys: t.ys.clone(),
                psi: t.psi.clone(),
            };
            let Some(pair) = m.pairs.class(w, a, &image) else {
                report.push(TheoryViolation::RightUnit {
                    word: w.clone(),
                    sort: a.clone(),
                    class: cls.clone(),
                });
                continue;
            };
            if let Some(value) = cell_value(&m.subst, w, a, pair) {
                if value != canon.apply(w, a, cls) {
                    report.push(TheoryViolation::RightUnit {
                        word: w.clone(),
                        sort: a.clone(),
                        class: cls.clone(),
                    });
                }
            }
        }
    }
}

/// One substitution path down from a triple: apply `μ` inside the named
/// slot(s), then once at the top.  `None` when any entry is missing.
fn mu_after_outer_mu(m: &Multicategory, w: &Word, a: &ObjId, t: &SubstTuple) -> Option<ElemId> {
    // `t` lives in (M ⊙ M) ⊙ M: ys are pair classes, x is a carrier elem.
    let mut ys = Vec::with_capacity(t.ys.len());
    for (i, y) in t.ys.iter().enumerate() {
        ys.push(cell_value(&m.subst, &t.blocks[i], &t.mid.letters()[i], y)?.clone());
    }
    let image = SubstTuple {
        mid: t.mid.clone(),
        blocks: t.blocks.clone(),
        x: t.x.clone(),
        ys,
        psi: t.psi.clone(),
    };
    let pair = m.pairs.class(w, a, &image)?;
    cell_value(&m.subst, w, a, pair).cloned()
}

fn mu_after_inner_mu(m: &Multicategory, w: &Word, a: &ObjId, t: &SubstTuple) -> Option<ElemId> {
    // `t` lives in M ⊙ (M ⊙ M): x is a pair class, ys are carrier elems.
    let x = cell_value(&m.subst, &t.mid, a, &t.x)?.clone();
    let image = SubstTuple {
        mid: t.mid.clone(),
        blocks: t.blocks.clone(),
        x,
        ys: t.ys.clone(),
        psi: t.psi.clone(),
    };
    let pair = m.pairs.class(w, a, &image)?;
    cell_value(&m.subst, w, a, pair).cloned()
}

fn check_associativity(m: &Multicategory, report: &mut Vec<TheoryViolation>) {
    let w3 = assoc_witness(&m.carrier, &m.carrier, &m.carrier)
        .expect("carrier composes with itself");
    for (w, a, table) in w3.left.cells() {
        for (cls, t) in &table.rep_of {
            let Some(lhs) = mu_after_outer_mu(m, w, a, t) else { continue };
            let Some(other) = cell_value(&w3.to_right, w, a, cls) else { continue };
            let Some(rhs) = mu_after_inner_mu(m, w, a, w3.right.rep(w, a, other)) else {
                continue;
            };
            if lhs != rhs {
                report.push(TheoryViolation::Associativity {
                    word: w.clone(),
                    sort: a.clone(),
                    class: cls.clone(),
                });
            }
        }
    }
    // Classes only reachable from the right bracketing.
    for (w, a, table) in w3.right.cells() {
        for (cls, t) in &table.rep_of {
            if cell_value(&w3.to_left, w, a, cls)
                .is_some_and(|back| cell_value(&w3.to_right, w, a, back).is_some())
            {
                continue; // covered by the first loop
            }
            let Some(rhs) = mu_after_inner_mu(m, w, a, t) else { continue };
            let Some(back) = cell_value(&w3.to_left, w, a, cls) else { continue };
            let Some(lhs) = mu_after_outer_mu(m, w, a, w3.left.rep(w, a, back)) else {
                continue;
            };
            if lhs != rhs {
                report.push(TheoryViolation::Associativity {
                    word: w.clone(),
                    sort: a.clone(),
                    class: cls.clone(),
                });
            }
        }
    }
}

fn check_normality(m: &Multicategory, report: &mut Vec<TheoryViolation>) {
    let sorts = m.sorts().clone();
    for b in sorts.objects() {
        for a in sorts.objects() {
            let w = unit_embed(b);
            let singles = m.units.graded.elems(&w, a);
            let targets = m.carrier.elems(&w, a);
            let mut seen = std::collections::BTreeSet::new();
            let mut bad = singles.len() != targets.len();
            for u in singles {
                match cell_value(&m.unit, &w, a, u) {
                    Some(v) => {
                        if !seen.insert(v.clone()) {
                            bad = true; // not injective
                        }
                    }
                    None => bad = true,
                }
            }
            if bad {
                report.push(TheoryViolation::NotNormal {
                    input: b.clone(),
                    output: a.clone(),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests;
