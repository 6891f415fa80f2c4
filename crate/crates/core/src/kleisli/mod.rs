//! Graded profunctors `A ⇸ SB` and their substitution calculus.
//!
//! A graded profunctor assigns a finite element set to each pair of a word
//! `𝐛` over the target category (length ≤ K) and an object `a` of the
//! source, with a left action by arity maps and a right action by source
//! morphisms.  Concretely it is stored as an ordinary [`Profunctor`] whose
//! contravariant boundary is the materialized word category
//! ([`SCategory`]), so validation, cells, and coend machinery are shared
//! with the ungraded case; this module adds the word-aware API on top.
//!
//! The substitution composite `g ⊙ f` ([`subst_compose`]), the graded unit
//! ([`kleisli_unit`]), the associativity witnesses ([`assoc_witness`]) and
//! the word-level extension of a plain profunctor ([`s_extend`]) together
//! give the composition structure that theories (monads in this setting)
//! are checked against.
//!
//! Every operation is truncated at the arity bound `K`: a result is exact
//! for the classes whose construction never passes through a word longer
//! than `K`, and law checks quantify over that safe region only.

mod assoc;
mod compose;
mod extend;
mod json;
mod unit;

pub use assoc::{assoc_witness, AssocWitness};
pub use compose::{
    subst_compose, subst_compose_cells, SubstComposite, SubstError, SubstTable, SubstTuple,
};
pub use extend::{s_extend, star_extension_cells, SExtension};
pub use json::{ElemEntry, GradedDoc, GradedDocError, LeftEntry, RightEntry, GRADED_SCHEMA};
pub use unit::{kleisli_unit, unit_inner_cells, unit_outer_cells, KleisliUnit};

use crate::doctrine::{ArityMap, Doctrine, SCategory, Word};
use crate::fincat::FinCategory;
use crate::ids::{ElemId, MorId, ObjId};
use crate::profunctor::{CellViolation, ProfCell, ProfDataError, ProfViolation, Profunctor};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GradedDataError {
    #[error("word {0} is longer than the bound {1}")]
    WordTooLong(Word, usize),
    #[error("arity map {0} is not over the target category within the bound")]
    UnknownArityMap(String),
    #[error("arity map {0} is tagged with the wrong doctrine")]
    ForeignDoctrine(String),
    #[error(transparent)]
    Data(#[from] ProfDataError),
}

/// A profunctor `A ⇸ SB`, graded by words over `B` of length ≤ `bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedProfunctor {
    pub doctrine: Doctrine,
    pub bound: usize,
    /// The materialized word category over the base target `B`.
    pub words: SCategory,
    /// The underlying plain profunctor `A ⇸ words.cat`.
    pub prof: Profunctor,
}

impl GradedProfunctor {
    /// Build from explicit tables keyed by words and arity maps.
    pub fn new(
        doctrine: Doctrine,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        bound: usize,
        cells: BTreeMap<(Word, ObjId), Vec<ElemId>>,
        left: BTreeMap<(ArityMap, ObjId), BTreeMap<ElemId, ElemId>>,
        right: BTreeMap<(Word, MorId), BTreeMap<ElemId, ElemId>>,
    ) -> Result<Self, GradedDataError> {
        let words = SCategory::new(target, doctrine, bound);
        let mut prof_cells = BTreeMap::new();
        for ((w, a), elems) in cells {
            let Some(obj) = words.try_obj(&w) else {
                return Err(GradedDataError::WordTooLong(w, bound));
            };
            prof_cells.insert((obj.clone(), a), elems);
        }
        let mut prof_left = BTreeMap::new();
        for ((am, a), table) in left {
            if am.doctrine != doctrine {
                return Err(GradedDataError::ForeignDoctrine(am.name()));
            }
            let Some(mor) = words.try_mor(&am) else {
                return Err(GradedDataError::UnknownArityMap(am.name()));
            };
            prof_left.insert((mor.clone(), a), table);
        }
        let mut prof_right = BTreeMap::new();
        for ((w, alpha), table) in right {
            let Some(obj) = words.try_obj(&w) else {
                return Err(GradedDataError::WordTooLong(w, bound));
            };
            prof_right.insert((obj.clone(), alpha), table);
        }
        let prof = Profunctor::new(source, words.cat.clone(), prof_cells, prof_left, prof_right)?;
        Ok(GradedProfunctor {
            doctrine,
            bound,
            words,
            prof,
        })
    }

    /// Build by evaluating action closures on every (arity map, element)
    /// and (word, morphism, element) combination.
    pub fn from_actions(
        doctrine: Doctrine,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        bound: usize,
        cells: BTreeMap<(Word, ObjId), Vec<ElemId>>,
        left_of: impl FnMut(&ArityMap, &ObjId, &ElemId) -> ElemId,
        right_of: impl FnMut(&Word, &MorId, &ElemId) -> ElemId,
    ) -> Result<Self, GradedDataError> {
        let words = SCategory::new(target, doctrine, bound);
        Self::from_actions_with(words, source, cells, left_of, right_of)
    }

    /// As [`Self::from_actions`], reusing an already materialized word
    /// category.
    pub fn from_actions_with(
        words: SCategory,
        source: Arc<FinCategory>,
        cells: BTreeMap<(Word, ObjId), Vec<ElemId>>,
        mut left_of: impl FnMut(&ArityMap, &ObjId, &ElemId) -> ElemId,
        mut right_of: impl FnMut(&Word, &MorId, &ElemId) -> ElemId,
    ) -> Result<Self, GradedDataError> {
        let bound = words.bound;
        let doctrine = words.doctrine;
        let mut prof_cells = BTreeMap::new();
        for ((w, a), elems) in cells {
            let Some(obj) = words.try_obj(&w) else {
                return Err(GradedDataError::WordTooLong(w, bound));
            };
            prof_cells.insert((obj.clone(), a), elems);
        }
        let prof = Profunctor::from_actions(
            source,
            words.cat.clone(),
            prof_cells,
            |beta, a, x| left_of(words.arity(beta), a, x),
            |w_obj, alpha, x| right_of(words.word(w_obj), alpha, x),
        )?;
        Ok(GradedProfunctor {
            doctrine,
            bound,
            words,
            prof,
        })
    }

    /// The covariant boundary `A`.
    pub fn source(&self) -> &Arc<FinCategory> {
        &self.prof.source
    }

    /// The base of the graded boundary `B` (elements live over words of it).
    pub fn base_target(&self) -> &Arc<FinCategory> {
        &self.words.base
    }

    pub fn elems(&self, w: &Word, a: &ObjId) -> &[ElemId] {
        match self.words.try_obj(w) {
            Some(obj) => self.prof.elems(obj, a),
            None => &[],
        }
    }

    /// Left action: for `g: 𝐛' -> 𝐛`, maps an element of `(𝐛, a)` into
    /// `(𝐛', a)`.
    pub fn left(&self, g: &ArityMap, a: &ObjId, x: &ElemId) -> &ElemId {
        self.prof.left(self.words.mor(g), a, x)
    }

    /// Right action along `α: a -> a'` of the source category.
    pub fn right(&self, w: &Word, alpha: &MorId, x: &ElemId) -> &ElemId {
        self.prof.right(self.words.obj(w), alpha, x)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Word, &ObjId, &Vec<ElemId>)> {
        self.prof
            .cells()
            .map(|((w_obj, a), elems)| (self.words.word(w_obj), a, elems))
    }

    pub fn total_elements(&self) -> usize {
        self.prof.total_elements()
    }

    pub fn validate(&self) -> Vec<ProfViolation> {
        self.prof.validate()
    }

    pub fn is_lawful(&self) -> bool {
        self.validate().is_empty()
    }
}

/// A 2-cell between parallel graded profunctors: a per-`(𝐛, a)` map of
/// elements commuting with both actions.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedCell {
    pub source: GradedProfunctor,
    pub target: GradedProfunctor,
    pub components: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>>,
}

impl GradedCell {
    pub fn identity(g: &GradedProfunctor) -> GradedCell {
        GradedCell::from_fn(g, g, |_, _, x| x.clone())
    }

    pub fn from_fn(
        source: &GradedProfunctor,
        target: &GradedProfunctor,
        mut f: impl FnMut(&Word, &ObjId, &ElemId) -> ElemId,
    ) -> GradedCell {
        let components = source
            .cells()
            .map(|(w, a, elems)| {
                (
                    (w.clone(), a.clone()),
                    elems.iter().map(|x| (x.clone(), f(w, a, x))).collect(),
                )
            })
            .collect();
        GradedCell {
            source: source.clone(),
            target: target.clone(),
            components,
        }
    }

    pub fn apply(&self, w: &Word, a: &ObjId, x: &ElemId) -> &ElemId {
        &self.components[&(w.clone(), a.clone())][x]
    }

    /// Vertical composition: `other` after `self`.
    pub fn then(&self, other: &GradedCell) -> GradedCell {
        assert_eq!(self.target, other.source, "graded cell boundary mismatch");
        GradedCell::from_fn(&self.source, &other.target, |w, a, x| {
            other.apply(w, a, self.apply(w, a, x)).clone()
        })
    }

    fn as_prof_cell(&self) -> ProfCell {
        let components = self
            .components
            .iter()
            .map(|((w, a), table)| {
                (
                    (self.source.words.obj(w).clone(), a.clone()),
                    table.clone(),
                )
            })
            .collect();
        ProfCell {
            source: self.source.prof.clone(),
            target: self.target.prof.clone(),
            components,
        }
    }

    pub fn check(&self) -> Vec<CellViolation> {
        if self.source.doctrine != self.target.doctrine
            || self.source.bound != self.target.bound
            || self.source.words != self.target.words
        {
            return vec![CellViolation::BoundaryMismatch];
        }
        self.as_prof_cell().check()
    }

    pub fn is_lawful(&self) -> bool {
        self.check().is_empty()
    }

    pub fn is_bijective(&self) -> bool {
        self.as_prof_cell().is_bijective()
    }

    pub fn is_inverse_of(&self, other: &GradedCell) -> bool {
        self.as_prof_cell().is_inverse_of(&other.as_prof_cell())
    }
}

#[cfg(test)]
mod tests;
