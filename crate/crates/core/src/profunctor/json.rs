//! `prof/v1` serialization.  Element sets are keyed by `"b|a"`, action
//! tables by `"β|a"` (left) and `"b|α"` (right); a literal `|` or `\` in an
//! id is backslash-escaped.  Maps are sorted, so serialization is canonical.

use super::{ProfDataError, Profunctor};
use crate::fincat::{CategoryDoc, CategoryDocError};
use crate::ids::{ElemId, MorId, ObjId};
use crate::util::{esc, split_key};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const PROF_SCHEMA: &str = "prof/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfunctorDoc {
    pub schema: String,
    pub source: CategoryDoc,
    pub target: CategoryDoc,
    pub elements: BTreeMap<String, Vec<ElemId>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub left: BTreeMap<String, BTreeMap<ElemId, ElemId>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub right: BTreeMap<String, BTreeMap<ElemId, ElemId>>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ProfDocError {
    #[error("expected schema {PROF_SCHEMA}, found {0}")]
    Schema(String),
    #[error("source category: {0}")]
    Source(CategoryDocError),
    #[error("target category: {0}")]
    Target(CategoryDocError),
    #[error("key {0:?} does not split into two components")]
    BadKey(String),
    #[error("two keys denote the same cell or table: {0:?}")]
    DuplicateKey(String),
    #[error("profunctor tables: {0}")]
    Data(#[from] ProfDataError),
}

fn join2(x: &str, y: &str) -> String {
    format!("{}|{}", esc(x), esc(y))
}

impl ProfunctorDoc {
    pub fn from_prof(p: &Profunctor) -> Self {
        let mut elements = BTreeMap::new();
        for ((b, a), elems) in p.cells() {
            elements.insert(join2(b.as_str(), a.as_str()), elems.clone());
        }
        let mut left = BTreeMap::new();
        for beta in p.target.morphisms() {
            for a in p.source.objects() {
                let table: BTreeMap<ElemId, ElemId> = p
                    .elems(&beta.dst, a)
                    .iter()
                    .map(|x| (x.clone(), p.left(&beta.id, a, x).clone()))
                    .collect();
                if !table.is_empty() {
                    left.insert(join2(beta.id.as_str(), a.as_str()), table);
                }
            }
        }
        let mut right = BTreeMap::new();
        for b in p.target.objects() {
            for alpha in p.source.morphisms() {
                let table: BTreeMap<ElemId, ElemId> = p
                    .elems(b, &alpha.src)
                    .iter()
                    .map(|x| (x.clone(), p.right(b, &alpha.id, x).clone()))
                    .collect();
                if !table.is_empty() {
                    right.insert(join2(b.as_str(), alpha.id.as_str()), table);
                }
            }
        }
        ProfunctorDoc {
            schema: PROF_SCHEMA.to_string(),
            source: CategoryDoc::from_category(&p.source),
            target: CategoryDoc::from_category(&p.target),
            elements,
            left,
            right,
        }
    }

    pub fn into_prof(self) -> Result<Profunctor, ProfDocError> {
        if self.schema != PROF_SCHEMA {
            return Err(ProfDocError::Schema(self.schema));
        }
        let source = Arc::new(self.source.into_category().map_err(ProfDocError::Source)?);
        let target = Arc::new(self.target.into_category().map_err(ProfDocError::Target)?);

        let mut cells = BTreeMap::new();
        for (key, elems) in self.elements {
            let parts = split_key(&key);
            let [b, a] = parts.as_slice() else {
                return Err(ProfDocError::BadKey(key));
            };
            let slot = (ObjId::new(b.clone()), ObjId::new(a.clone()));
            if cells.insert(slot, elems).is_some() {
                return Err(ProfDocError::DuplicateKey(key));
            }
        }
        let mut left = BTreeMap::new();
        for (key, table) in self.left {
            let parts = split_key(&key);
            let [beta, a] = parts.as_slice() else {
                return Err(ProfDocError::BadKey(key));
            };
            let slot = (MorId::new(beta.clone()), ObjId::new(a.clone()));
            if left.insert(slot, table).is_some() {
                return Err(ProfDocError::DuplicateKey(key));
            }
        }
        let mut right = BTreeMap::new();
        for (key, table) in self.right {
            let parts = split_key(&key);
            let [b, alpha] = parts.as_slice() else {
                return Err(ProfDocError::BadKey(key));
            };
            let slot = (ObjId::new(b.clone()), MorId::new(alpha.clone()));
            if right.insert(slot, table).is_some() {
                return Err(ProfDocError::DuplicateKey(key));
            }
        }
        Ok(Profunctor::new(source, target, cells, left, right)?)
    }
}
