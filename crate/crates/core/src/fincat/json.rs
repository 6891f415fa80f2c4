//! On-disk form of categories (`fincat/v1`) and functors (`functor/v1`).
//!
//! Emitted documents sort every table, so serialization is canonical:
//! loading and re-saving a document is byte-stable.

use super::{CategoryDataError, FinCategory, Functor, FunctorDataError, Mor};
use crate::ids::{MorId, ObjId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const FINCAT_SCHEMA: &str = "fincat/v1";
pub const FUNCTOR_SCHEMA: &str = "functor/v1";

#[derive(Debug, Clone, thiserror::Error)]
pub enum CategoryDocError {
    #[error("expected schema {FINCAT_SCHEMA}, found {0:?}")]
    Schema(String),
    #[error(transparent)]
    Data(#[from] CategoryDataError),
}

/// `fincat/v1` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub schema: String,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<Mor>,
    pub identities: BTreeMap<ObjId, MorId>,
    /// Triples `[g, f, gf]` meaning `g ∘ f = gf`.
    pub compose: Vec<[MorId; 3]>,
}

impl CategoryDoc {
    pub fn from_category(cat: &FinCategory) -> Self {
        CategoryDoc {
            schema: FINCAT_SCHEMA.to_owned(),
            objects: cat.objects().to_vec(),
            morphisms: cat.morphisms().to_vec(),
            identities: cat
                .objects()
                .iter()
                .map(|o| (o.clone(), cat.identity(o).clone()))
                .collect(),
            compose: cat
                .compose_entries()
                .map(|((g, f), gf)| [g.clone(), f.clone(), gf.clone()])
                .collect(),
        }
    }

    pub fn into_category(self) -> Result<FinCategory, CategoryDocError> {
        if self.schema != FINCAT_SCHEMA {
            return Err(CategoryDocError::Schema(self.schema));
        }
        Ok(FinCategory::new(
            self.objects,
            self.morphisms,
            self.identities,
            self.compose
                .into_iter()
                .map(|[g, f, gf]| ((g, f), gf)),
        )?)
    }
}

/// `functor/v1` document; boundary categories are carried inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub schema: String,
    pub source: CategoryDoc,
    pub target: CategoryDoc,
    pub on_objects: BTreeMap<ObjId, ObjId>,
    pub on_morphisms: BTreeMap<MorId, MorId>,
}

#[derive(Debug, thiserror::Error)]
pub enum FunctorDocError {
    #[error("expected schema {FUNCTOR_SCHEMA}, found {0:?}")]
    Schema(String),
    #[error("source category: {0}")]
    Source(CategoryDocError),
    #[error("target category: {0}")]
    Target(CategoryDocError),
    #[error(transparent)]
    Maps(#[from] FunctorDataError),
}

impl FunctorDoc {
    pub fn from_functor(f: &Functor) -> Self {
        FunctorDoc {
            schema: FUNCTOR_SCHEMA.to_owned(),
            source: CategoryDoc::from_category(&f.source),
            target: CategoryDoc::from_category(&f.target),
            on_objects: f
                .source
                .objects()
                .iter()
                .map(|o| (o.clone(), f.on_obj(o).clone()))
                .collect(),
            on_morphisms: f
                .source
                .morphisms()
                .iter()
                .map(|m| (m.id.clone(), f.on_mor(&m.id).clone()))
                .collect(),
        }
    }

    pub fn into_functor(self) -> Result<Functor, FunctorDocError> {
        if self.schema != FUNCTOR_SCHEMA {
            return Err(FunctorDocError::Schema(self.schema));
        }
        let source = Arc::new(self.source.into_category().map_err(FunctorDocError::Source)?);
        let target = Arc::new(self.target.into_category().map_err(FunctorDocError::Target)?);
        Ok(Functor::new(
            source,
            target,
            self.on_objects,
            self.on_morphisms,
        )?)
    }
}
