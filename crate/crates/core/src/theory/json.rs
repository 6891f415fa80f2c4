//! `theory/v1` serialization.  The carrier is stored as one entry per
//! element (`{id, inputs, output}`) plus both action tables in the
//! `graded/v1` entry shapes, with the sorts category written once.  The
//! unit cell is stored only at generators:
//! one entry per arrow of the sorts category, the rest of the cell is
//! rebuilt by naturality.  The substitution cell is stored one entry per
//! class of `M ⊙ M`, as an explicit composable tuple; any tuple denoting
//! the class is accepted on input, entries are written at canonical
//! representatives.  Absent classes stay undefined, so partial
//! substitution round-trips.

use super::Multicategory;
use crate::doctrine::{unit_embed, ArityMap, Doctrine, Word};
use crate::fincat::{CategoryDoc, FinCategory};
use crate::ids::{ElemId, MorId, ObjId};
use crate::kleisli::{
    subst_compose, ElemEntry, GradedDoc, GradedDocError, LeftEntry, RightEntry, SubstError,
    SubstTuple, GRADED_SCHEMA,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const THEORY_SCHEMA: &str = "theory/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoryDoc {
    pub schema: String,
    pub doctrine: Doctrine,
    pub bound: usize,
    #[serde(default = "default_true")]
    pub normal: bool,
    pub sorts: CategoryDoc,
    pub elements: Vec<ElementEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub left: Vec<LeftEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub right: Vec<RightEntry>,
    pub unit: Vec<UnitEntry>,
    pub subst: Vec<SubstEntry>,
}

fn default_true() -> bool {
    true
}

/// One element of the cell `(inputs, output)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementEntry {
    pub id: ElemId,
    pub inputs: Vec<ObjId>,
    pub output: ObjId,
}

/// `elem` is the unit at the singleton arity map of `arrow`; units at
/// wider words follow by naturality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitEntry {
    pub arrow: MorId,
    pub elem: ElemId,
}

/// One substitution instance: `outer ∈ M(mid, output)`, `inner[i] ∈
/// M(blocks[i], mid[i])`, matched into the cell word by `matching[p]` =
/// the `word` position feeding flat position `p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubstEntry {
    pub word: Vec<ObjId>,
    pub output: ObjId,
    pub mid: Vec<ObjId>,
    pub outer: ElemId,
    pub blocks: Vec<Vec<ObjId>>,
    pub inner: Vec<ElemId>,
    pub matching: Vec<usize>,
    pub result: ElemId,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum TheoryDocError {
    #[error("expected schema {THEORY_SCHEMA}, found {0}")]
    Schema(String),
    #[error("carrier: {0}")]
    Carrier(#[from] GradedDocError),
    #[error("substitution composite: {0}")]
    Compose(#[from] SubstError),
    #[error("unit entry names an arrow not in the sorts category: {0}")]
    UnknownArrow(MorId),
    #[error("two unit entries for arrow {0}")]
    DuplicateUnit(MorId),
    #[error("no unit entry for arrow {0}")]
    MissingUnit(MorId),
    #[error("unit for arrow {arrow} is not an element of its cell: {elem}")]
    UnitElem { arrow: MorId, elem: ElemId },
    #[error("element {id} listed twice in cell ({inputs:?}, {output})")]
    DuplicateElem {
        id: ElemId,
        inputs: Vec<ObjId>,
        output: ObjId,
    },
    #[error("substitution entry at word {word:?} output {output} does not denote a composable pair")]
    SubstClass { word: Vec<ObjId>, output: ObjId },
    #[error("two substitution entries denote the same class at word {word:?} output {output}")]
    DuplicateSubst { word: Vec<ObjId>, output: ObjId },
}

impl TheoryDoc {
    pub fn from_theory(m: &Multicategory) -> Self {
        let g = GradedDoc::from_graded(&m.carrier);
        let elements = g
            .elements
            .into_iter()
            .flat_map(|cell| {
                cell.elems.into_iter().map(move |id| ElementEntry {
                    id,
                    inputs: cell.word.clone(),
                    output: cell.object.clone(),
                })
            })
            .collect();
        let cat = m.sorts();

        let mut unit = Vec::new();
        for f in cat.morphisms() {
            let hat = ArityMap::new(
                m.doctrine(),
                unit_embed(&f.src),
                unit_embed(&f.dst),
                vec![0],
                vec![f.id.clone()],
                cat,
            )
            .expect("a single arrow is an arity map");
            unit.push(UnitEntry {
                arrow: f.id.clone(),
                elem: m.unit_elem(&hat, &f.dst).clone(),
            });
        }

        let mut subst = Vec::new();
        for ((w, a), column) in &m.subst.components {
            for (cls, value) in column {
                let t = m.pairs().rep(w, a, cls);
                subst.push(SubstEntry {
                    word: w.letters().to_vec(),
                    output: a.clone(),
                    mid: t.mid.letters().to_vec(),
                    outer: t.x.clone(),
                    blocks: t.blocks.iter().map(|b| b.letters().to_vec()).collect(),
                    inner: t.ys.clone(),
                    matching: t.psi.clone(),
                    result: value.clone(),
                });
            }
        }

        TheoryDoc {
            schema: THEORY_SCHEMA.to_string(),
            doctrine: g.doctrine,
            bound: g.bound,
            normal: m.require_normal,
            sorts: g.source,
            elements,
            left: g.left,
            right: g.right,
            unit,
            subst,
        }
    }

    pub fn into_theory(self) -> Result<Multicategory, TheoryDocError> {
        if self.schema != THEORY_SCHEMA {
            return Err(TheoryDocError::Schema(self.schema));
        }
        let mut cells: BTreeMap<(Vec<ObjId>, ObjId), Vec<ElemId>> = BTreeMap::new();
        for e in self.elements {
            let slot = cells.entry((e.inputs.clone(), e.output.clone())).or_default();
            if slot.contains(&e.id) {
                return Err(TheoryDocError::DuplicateElem {
                    id: e.id,
                    inputs: e.inputs,
                    output: e.output,
                });
            }
            slot.push(e.id);
        }
        let elements = cells
            .into_iter()
            .map(|((word, object), elems)| ElemEntry {
                word,
                object,
                elems,
            })
            .collect();
        let carrier = GradedDoc {
            schema: GRADED_SCHEMA.to_string(),
            doctrine: self.doctrine,
            bound: self.bound,
            source: self.sorts.clone(),
            target: self.sorts,
            elements,
            left: self.left,
            right: self.right,
        }
        .into_graded()?;
        let cat = carrier.source().clone();

        let mut units: BTreeMap<MorId, ElemId> = BTreeMap::new();
        for e in self.unit {
            let f = cat
                .mor(&e.arrow)
                .ok_or_else(|| TheoryDocError::UnknownArrow(e.arrow.clone()))?;
            if !carrier.elems(&unit_embed(&f.src), &f.dst).contains(&e.elem) {
                return Err(TheoryDocError::UnitElem {
                    arrow: e.arrow,
                    elem: e.elem,
                });
            }
            if units.insert(e.arrow.clone(), e.elem).is_some() {
                return Err(TheoryDocError::DuplicateUnit(e.arrow));
            }
        }
        for f in cat.morphisms() {
            if !units.contains_key(&f.id) {
                return Err(TheoryDocError::MissingUnit(f.id.clone()));
            }
        }

        let pairs = subst_compose(&carrier, &carrier)?;
        let mut subst: BTreeMap<(Word, ObjId, ElemId), ElemId> = BTreeMap::new();
        for e in self.subst {
            let w = Word::new(e.word.clone());
            let t = SubstTuple {
                mid: Word::new(e.mid),
                blocks: e.blocks.into_iter().map(Word::new).collect(),
                x: e.outer,
                ys: e.inner,
                psi: e.matching,
            };
            let cls = pairs
                .class(&w, &e.output, &t)
                .ok_or_else(|| TheoryDocError::SubstClass {
                    word: e.word.clone(),
                    output: e.output.clone(),
                })?
                .clone();
            if subst.insert((w, e.output.clone(), cls), e.result).is_some() {
                return Err(TheoryDocError::DuplicateSubst {
                    word: e.word,
                    output: e.output,
                });
            }
        }

        let actions = carrier.clone();
        let normal = self.normal;
        Ok(Multicategory::from_tables(
            carrier,
            move |w, a, u: &ArityMap| unit_value(&actions, &cat, &units, w, a, u),
            move |w, a, t| {
                let cls = pairs.class(w, a, t).expect("representative classes exist");
                subst.get(&(w.clone(), a.clone(), cls.clone())).cloned()
            },
            normal,
        )?)
    }
}

/// Rebuild the unit at `u: w -> (a)` from the generator at its arrow:
/// `u = û ∘ pick` with `pick` the pure projection onto position
/// `u.index[0]`, so the value is the generator pushed along `pick`.
fn unit_value(
    carrier: &crate::kleisli::GradedProfunctor,
    cat: &FinCategory,
    units: &BTreeMap<MorId, ElemId>,
    w: &Word,
    a: &ObjId,
    u: &ArityMap,
) -> ElemId {
    let base = &units[&u.arrows[0]];
    if u.source.len() == 1 {
        return base.clone();
    }
    let i = u.index[0];
    let pick = ArityMap::pure(
        carrier.doctrine,
        w.clone(),
        unit_embed(&u.source.letters()[i]),
        vec![i],
        cat,
    )
    .expect("projection onto one letter is an arity map");
    carrier.left(&pick, a, base).clone()
}
