//! `graded/v1` serialization.  The shape follows `prof/v1`, plus the
//! doctrine and the arity bound; because cells are keyed by words, the
//! element and action tables are entry lists with explicit letter arrays
//! instead of string-keyed maps.  Entries are sorted, so output is
//! canonical.

use super::{GradedDataError, GradedProfunctor};
use crate::doctrine::{ArityMap, Doctrine, Word};
use crate::fincat::{CategoryDoc, CategoryDocError};
use crate::ids::{ElemId, MorId, ObjId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const GRADED_SCHEMA: &str = "graded/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedDoc {
    pub schema: String,
    pub doctrine: Doctrine,
    pub bound: usize,
    pub source: CategoryDoc,
    pub target: CategoryDoc,
    pub elements: Vec<ElemEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub left: Vec<LeftEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub right: Vec<RightEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElemEntry {
    pub word: Vec<ObjId>,
    pub object: ObjId,
    pub elems: Vec<ElemId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeftEntry {
    pub source_word: Vec<ObjId>,
    pub target_word: Vec<ObjId>,
    pub index: Vec<usize>,
    pub arrows: Vec<MorId>,
    pub object: ObjId,
    pub table: BTreeMap<ElemId, ElemId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RightEntry {
    pub word: Vec<ObjId>,
    pub morphism: MorId,
    pub table: BTreeMap<ElemId, ElemId>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum GradedDocError {
    #[error("expected schema {GRADED_SCHEMA}, found {0}")]
    Schema(String),
    #[error("source category: {0}")]
    Source(CategoryDocError),
    #[error("target category: {0}")]
    Target(CategoryDocError),
    #[error("left action entry is not a valid arity map: {0}")]
    Arity(#[from] crate::doctrine::ArityError),
    #[error("two entries denote the same cell or table")]
    DuplicateEntry,
    #[error(transparent)]
    Graded(#[from] GradedDataError),
}

impl GradedDoc {
    pub fn from_graded(g: &GradedProfunctor) -> Self {
        let mut elements: Vec<ElemEntry> = g
            .cells()
            .map(|(w, a, elems)| ElemEntry {
                word: w.letters().to_vec(),
                object: a.clone(),
                elems: elems.clone(),
            })
            .collect();
        elements.sort_by(|x, y| (&x.word, &x.object).cmp(&(&y.word, &y.object)));

        let mut left = Vec::new();
        for m in g.words.cat.morphisms() {
            let am = g.words.arity(&m.id);
            for a in g.source().objects() {
                let table: BTreeMap<ElemId, ElemId> = g
                    .elems(&am.target, a)
                    .iter()
                    .map(|x| (x.clone(), g.left(am, a, x).clone()))
                    .collect();
                if table.is_empty() {
                    continue;
                }
                left.push(LeftEntry {
                    source_word: am.source.letters().to_vec(),
                    target_word: am.target.letters().to_vec(),
                    index: am.index.clone(),
                    arrows: am.arrows.clone(),
                    object: a.clone(),
                    table,
                });
            }
        }
        left.sort_by(|x, y| {
            (&x.target_word, &x.source_word, &x.index, &x.arrows, &x.object)
                .cmp(&(&y.target_word, &y.source_word, &y.index, &y.arrows, &y.object))
        });

        let mut right = Vec::new();
        let words_used: std::collections::BTreeSet<&Word> = g.cells().map(|(w, _, _)| w).collect();
        for w in words_used {
            for alpha in g.source().morphisms() {
                let table: BTreeMap<ElemId, ElemId> = g
                    .elems(w, &alpha.src)
                    .iter()
                    .map(|x| (x.clone(), g.right(w, &alpha.id, x).clone()))
                    .collect();
                if table.is_empty() {
                    continue;
                }
                right.push(RightEntry {
                    word: w.letters().to_vec(),
                    morphism: alpha.id.clone(),
                    table,
                });
            }
        }
        right.sort_by(|x, y| (&x.word, &x.morphism).cmp(&(&y.word, &y.morphism)));

        GradedDoc {
            schema: GRADED_SCHEMA.to_string(),
            doctrine: g.doctrine,
            bound: g.bound,
            source: CategoryDoc::from_category(g.source()),
            target: CategoryDoc::from_category(g.base_target()),
            elements,
            left,
            right,
        }
    }

    pub fn into_graded(self) -> Result<GradedProfunctor, GradedDocError> {
        if self.schema != GRADED_SCHEMA {
            return Err(GradedDocError::Schema(self.schema));
        }
        let source = Arc::new(self.source.into_category().map_err(GradedDocError::Source)?);
        let target = Arc::new(self.target.into_category().map_err(GradedDocError::Target)?);

        let mut cells = BTreeMap::new();
        for e in self.elements {
            let slot = (Word::new(e.word), e.object);
            if cells.insert(slot, e.elems).is_some() {
                return Err(GradedDocError::DuplicateEntry);
            }
        }
        let mut left = BTreeMap::new();
        for e in self.left {
            let am = ArityMap::new(
                self.doctrine,
                Word::new(e.source_word),
                Word::new(e.target_word),
                e.index,
                e.arrows,
                &target,
            )?;
            if left.insert((am, e.object), e.table).is_some() {
                return Err(GradedDocError::DuplicateEntry);
            }
        }
        let mut right = BTreeMap::new();
        for e in self.right {
            let slot = (Word::new(e.word), e.morphism);
            if right.insert(slot, e.table).is_some() {
                return Err(GradedDocError::DuplicateEntry);
            }
        }
        Ok(GradedProfunctor::new(
            self.doctrine,
            source,
            target,
            self.bound,
            cells,
            left,
            right,
        )?)
    }
}
