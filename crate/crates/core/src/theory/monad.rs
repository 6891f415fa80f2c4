//! The monad a single-sorted theory induces on a finite set.
//!
//! `T(Y) = ⊕ₙ M(n) × Yⁿ` modulo the coend relation `(e·h, v) ~ (e, h·v)`
//! over arity maps `h`, truncated at the word bound.  The layers nest:
//! applying `T` to the index set of `T(X)` gives `TT(X)`, which is where
//! the multiplication lives — it substitutes representative rows into
//! the outer element and concatenates values, when the combined arity
//! still fits under the bound.

use super::Multicategory;
use crate::doctrine::Word;
use crate::ids::{ElemId, ObjId};
use crate::util::UnionFind;
use std::collections::BTreeMap;
use std::fmt;

/// A raw element of `T(Y)`: an `n`-ary theory element applied to a row
/// of `n` values from `Y`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonadElem {
    pub op: ElemId,
    pub args: Vec<usize>,
}

/// One application of `T` to a finite set `{0, …, size−1}`.
#[derive(Debug, Clone)]
pub struct TLayer {
    pub set_size: usize,
    /// Canonical representative per class, sorted.
    pub reps: Vec<MonadElem>,
    class_of: BTreeMap<MonadElem, usize>,
}

impl TLayer {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class(&self, e: &MonadElem) -> Option<usize> {
        self.class_of.get(e).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonadViolation {
    LeftUnit { class: usize },
    RightUnit { class: usize },
    Associativity { class: usize },
}

impl fmt::Display for MonadViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadViolation::LeftUnit { class } => {
                write!(out, "T-unit then multiplication is not the identity at class {class}")
            }
            MonadViolation::RightUnit { class } => {
                write!(out, "mapped units then multiplication is not the identity at class {class}")
            }
            MonadViolation::Associativity { class } => {
                write!(out, "the two collapse orders disagree at class {class}")
            }
        }
    }
}

/// The induced monad of a single-sorted theory on `{0, …, set_size−1}`.
#[derive(Debug, Clone)]
pub struct InducedMonad {
    theory: Multicategory,
    sort: ObjId,
    pub set_size: usize,
    pub base: TLayer,
}

pub fn induced_monad_on_set(m: &Multicategory, set_size: usize) -> InducedMonad {
    let sorts = m.sorts().clone();
    assert_eq!(sorts.objects().len(), 1, "the theory must be single-sorted");
    let sort = sorts.objects()[0].clone();
    let monad = InducedMonad {
        theory: m.clone(),
        sort,
        set_size,
        base: TLayer {
            set_size,
            reps: Vec::new(),
            class_of: BTreeMap::new(),
        },
    };
    let base = monad.layer(set_size);
    InducedMonad { base, ..monad }
}

impl InducedMonad {
    fn word(&self, n: usize) -> Word {
        Word::new(std::iter::repeat(self.sort.clone()).take(n))
    }

    /// Apply `T` to a `size`-element set: close the raw pairs under the
    /// relation `(e·h, v) ~ (e, h·v)` for every arity map `h`.
    pub fn layer(&self, size: usize) -> TLayer {
        let m = &self.theory;
        let k = m.bound();
        let mut nodes: Vec<MonadElem> = Vec::new();
        for n in 0..=k {
            let w = self.word(n);
            for e in m.elems(&w, &self.sort) {
                for args in rows(size, n) {
                    nodes.push(MonadElem {
                        op: e.clone(),
                        args,
                    });
                }
            }
        }
        nodes.sort();
        let index: BTreeMap<MonadElem, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut uf = UnionFind::new(nodes.len());
        for n in 0..=k {
            let target = self.word(n);
            for h in m.carrier.words.arities_into(&target) {
                // h: 𝐧' → 𝐧 relates (e·h, v) at 𝐧' with (e, h·v) at 𝐧.
                let pushed = |v: &[usize]| -> Vec<usize> {
                    h.index.iter().map(|&i| v[i]).collect()
                };
                for e in m.elems(&target, &self.sort) {
                    let moved = m.carrier.left(h, &self.sort, e).clone();
                    for v in rows(size, h.source.len()) {
                        let lower = MonadElem {
                            op: moved.clone(),
                            args: v.clone(),
                        };
                        let upper = MonadElem {
                            op: e.clone(),
                            args: pushed(&v),
                        };
                        uf.union(index[&lower], index[&upper]);
                    }
                }
            }
        }
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..nodes.len() {
            members.entry(uf.find(i)).or_default().push(i);
        }
        let mut reps: Vec<MonadElem> = members
            .values()
            .map(|group| nodes[*group.iter().min().unwrap()].clone())
            .collect();
        reps.sort();
        let root_class: BTreeMap<usize, usize> = reps
            .iter()
            .enumerate()
            .map(|(c, rep)| (uf.find(index[rep]), c))
            .collect();
        let mut class_of = BTreeMap::new();
        for (i, node) in nodes.iter().enumerate() {
            class_of.insert(node.clone(), root_class[&uf.find(i)]);
        }
        TLayer {
            set_size: size,
            reps,
            class_of,
        }
    }

    pub fn size(&self) -> usize {
        self.base.len()
    }

    pub fn theory(&self) -> &Multicategory {
        &self.theory
    }

    /// `X → T(X)`: the unit element applied to a single value.
    pub fn unit(&self, x: usize) -> usize {
        let e = self.theory.unit_at(&self.sort).clone();
        self.base
            .class(&MonadElem {
                op: e,
                args: vec![x],
            })
            .expect("unit row is within bound")
    }

    /// Collapse one layer: an element of `T(upper)` whose arguments are
    /// classes of `lower` becomes an element of `lower`'s kind.  `None`
    /// when the substituted arity overflows the bound.
    pub fn mult(&self, outer: &MonadElem, lower: &TLayer) -> Option<usize> {
        let m = &self.theory;
        let n = outer.args.len();
        let inner: Vec<&MonadElem> = outer.args.iter().map(|&c| &lower.reps[c]).collect();
        let blocks: Vec<Word> = inner.iter().map(|e| self.word(e.args.len())).collect();
        let ys: Vec<ElemId> = inner.iter().map(|e| e.op.clone()).collect();
        let value = m.subst_entry(&self.word(n), &self.sort, &outer.op, &blocks, &ys)?;
        let args: Vec<usize> = inner.iter().flat_map(|e| e.args.iter().copied()).collect();
        lower.class(&MonadElem {
            op: value.clone(),
            args,
        })
    }

    /// Unit laws, checked on every class of `T(X)` and the units of
    /// `TT(X)`.
    pub fn check_units(&self) -> Vec<MonadViolation> {
        let mut report = Vec::new();
        let unit_op = self.theory.unit_at(&self.sort).clone();
        for (c, rep) in self.base.reps.iter().enumerate() {
            // η then μ: the outer unit applied to the class collapses back.
            let outer = MonadElem {
                op: unit_op.clone(),
                args: vec![c],
            };
            if self.mult(&outer, &self.base) != Some(c) {
                report.push(MonadViolation::LeftUnit { class: c });
            }
            // T(η) then μ: units under the original element collapse back.
            let outer = MonadElem {
                op: rep.op.clone(),
                args: rep.args.iter().map(|&x| self.unit(x)).collect(),
            };
            if self.mult(&outer, &self.base) != Some(c) {
                report.push(MonadViolation::RightUnit { class: c });
            }
        }
        report
    }

    /// Associativity: both collapse orders from `TTT(X)` agree wherever
    /// both are defined.  Exhaustive — keep the set and bound small.
    pub fn check_assoc(&self) -> Vec<MonadViolation> {
        let mut report = Vec::new();
        let middle = self.layer(self.base.len());
        let top = self.layer(middle.len());
        for (c, rep) in top.reps.iter().enumerate() {
            // μ_T: collapse the two outer layers.
            let outer_first = self.mult(rep, &middle);
            // T(μ): collapse every middle argument into the base.
            let collapsed: Option<Vec<usize>> = rep
                .args
                .iter()
                .map(|&i| self.mult(&middle.reps[i], &self.base))
                .collect();
            let inner_first = collapsed.map(|args| MonadElem {
                op: rep.op.clone(),
                args,
            });
            let (Some(upper), Some(lowered)) = (outer_first, inner_first) else {
                continue;
            };
            let lhs = self.mult(&middle.reps[upper], &self.base);
            let rhs = self.mult(&lowered, &self.base);
            let (Some(lhs), Some(rhs)) = (lhs, rhs) else { continue };
            if lhs != rhs {
                report.push(MonadViolation::Associativity { class: c });
            }
        }
        report
    }
}

fn rows(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..n {
        acc = acc
            .into_iter()
            .flat_map(|r| {
                (0..size).map(move |v| {
                    let mut r2 = r.clone();
                    r2.push(v);
                    r2
                })
            })
            .collect();
    }
    acc
}
