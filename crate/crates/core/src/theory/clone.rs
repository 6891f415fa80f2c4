//! Abstract clones: term operations of a finite algebra as a
//! single-sorted cartesian theory.
//!
//! Operations are flat value tables over the carrier `{0, …, s−1}`.  The
//! arity-`n` part of the clone is the closure of the projections under
//! pointwise superposition with the generators — independent per arity,
//! so the bound only caps which parts get materialized.  Substitution is
//! function composition and lands back in the closure.

use super::Multicategory;
use crate::doctrine::Word;
use crate::fincat::FinCategory;
use crate::ids::{ElemId, ObjId};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A finite operation as a value table: inputs decode little-endian,
/// `table[Σ vⱼ·sʲ] = op(v₀, …)`, so `table.len() = s^arity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl OpTable {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<usize>) -> OpTable {
        OpTable {
            name: name.into(),
            arity,
            table,
        }
    }
}

fn index_of(args: &[usize], s: usize) -> usize {
    args.iter().rev().fold(0, |acc, &v| acc * s + v)
}

/// All argument rows in table order: `tuples(s, n)[index_of(v, s)] == v`.
fn tuples(s: usize, n: usize) -> Vec<Vec<usize>> {
    (0..s.pow(n as u32))
        .map(|idx| (0..n).map(|j| (idx / s.pow(j as u32)) % s).collect())
        .collect()
}

fn projection_table(s: usize, n: usize, i: usize) -> Vec<usize> {
    tuples(s, n).iter().map(|t| t[i]).collect()
}

fn table_id(t: &[usize]) -> ElemId {
    let body: String = if t.iter().all(|&v| v < 10) {
        t.iter().map(|v| v.to_string()).collect()
    } else {
        t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
    };
    ElemId::new(format!("t{body}"))
}

/// The arity-`n` term operations: closure of projections under
/// superposition `g(t₁, …, t_m)` with each generator `g`.
fn term_tables(s: usize, ops: &[OpTable], n: usize) -> BTreeSet<Vec<usize>> {
    let mut set: BTreeSet<Vec<usize>> = (0..n).map(|i| projection_table(s, n, i)).collect();
    let mut fresh: Vec<Vec<usize>> = set.iter().cloned().collect();
    // Nullary generators seed arity n directly.
    for g in ops.iter().filter(|g| g.arity == 0) {
        let t = vec![g.table[0]; s.pow(n as u32)];
        if set.insert(t.clone()) {
            fresh.push(t);
        }
    }
    while !fresh.is_empty() {
        let mut next = Vec::new();
        let current: Vec<Vec<usize>> = set.iter().cloned().collect();
        for g in ops.iter().filter(|g| g.arity > 0) {
            // Rows of arguments with at least one coordinate new this round.
            let mut rows = vec![Vec::new()];
            for _ in 0..g.arity {
                rows = rows
                    .into_iter()
                    .flat_map(|row: Vec<&Vec<usize>>| {
                        current.iter().map(move |t| {
                            let mut r = row.clone();
                            r.push(t);
                            r
                        })
                    })
                    .collect();
            }
            for row in rows {
                if !row.iter().any(|t| fresh.contains(t)) {
                    continue;
                }
                let composed: Vec<usize> = (0..s.pow(n as u32))
                    .map(|idx| {
                        let args: Vec<usize> = row.iter().map(|t| t[idx]).collect();
                        g.table[index_of(&args, s)]
                    })
                    .collect();
                if set.insert(composed.clone()) {
                    next.push(composed);
                }
            }
        }
        fresh = next;
    }
    set
}

pub(crate) fn single_sort() -> (Arc<FinCategory>, ObjId) {
    let x = ObjId::new("x");
    (Arc::new(FinCategory::discrete([x.clone()])), x)
}

fn clone_theory(
    s: usize,
    k: usize,
    parts: Vec<BTreeSet<Vec<usize>>>,
    require_normal: bool,
) -> Multicategory {
    assert!(s >= 1, "carrier must be nonempty");
    let (sorts, x) = single_sort();
    let by_id: BTreeMap<ElemId, Vec<usize>> = parts
        .iter()
        .flat_map(|set| set.iter().map(|t| (table_id(t), t.clone())))
        .collect();
    let mut cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = BTreeMap::new();
    for (n, set) in parts.iter().enumerate() {
        if set.is_empty() {
            continue;
        }
        let w = Word::new(std::iter::repeat(x.clone()).take(n));
        cells.insert((w, x.clone()), set.iter().map(|t| table_id(t)).collect());
    }

    let reindex = |table: &[usize], index: &[usize], vars: usize| -> Vec<usize> {
        // Precompose with the variable substitution the arity map spells.
        tuples(s, vars)
            .iter()
            .map(|v| {
                let args: Vec<usize> = index.iter().map(|&i| v[i]).collect();
                table[index_of(&args, s)]
            })
            .collect()
    };
    let carrier = crate::kleisli::GradedProfunctor::from_actions(
        crate::doctrine::Doctrine::Cartesian,
        sorts.clone(),
        sorts.clone(),
        k,
        cells,
        |h, _a, e| {
            // h: xⁿ' → xⁿ moves an n-ary table to n' variables.
            table_id(&reindex(&by_id[e], &h.index, h.source.len()))
        },
        |_w, _alpha, e| e.clone(),
    )
    .expect("clone tables are well formed");

    Multicategory::from_tables(
        carrier,
        |w, _a, u| table_id(&projection_table(s, w.len(), u.index[0])),
        |w, _a, t| {
            let f = &by_id[&t.x];
            let gs: Vec<&Vec<usize>> = t.ys.iter().map(|y| &by_id[y]).collect();
            let offsets: Vec<usize> = t
                .blocks
                .iter()
                .scan(0, |acc, b| {
                    let at = *acc;
                    *acc += b.len();
                    Some(at)
                })
                .collect();
            let composed: Vec<usize> = tuples(s, w.len())
                .iter()
                .map(|v| {
                    let args: Vec<usize> = gs
                        .iter()
                        .enumerate()
                        .map(|(i, g)| {
                            let block: Vec<usize> = (0..t.blocks[i].len())
                                .map(|p| v[t.psi[offsets[i] + p]])
                                .collect();
                            g[index_of(&block, s)]
                        })
                        .collect();
                    f[index_of(&args, s)]
                })
                .collect();
            Some(table_id(&composed))
        },
        require_normal,
    )
    .expect("clone carrier composes with itself")
}

/// The clone of `({0..s}, ops)` up to arity `k`.  Normality is detected:
/// the result demands it exactly when no non-identity unary term exists.
pub fn clone_of_algebra(s: usize, ops: &[OpTable], k: usize) -> Multicategory {
    for g in ops {
        assert_eq!(
            g.table.len(),
            s.pow(g.arity as u32),
            "operation {} has a wrong table size",
            g.name
        );
        assert!(
            g.table.iter().all(|&v| v < s),
            "operation {} has out-of-range values",
            g.name
        );
    }
    let parts: Vec<BTreeSet<Vec<usize>>> =
        (0..=k).map(|n| term_tables(s, ops, n)).collect();
    let normal = parts[1].len() == 1;
    clone_theory(s, k, parts, normal)
}

/// The full clone: every operation `sⁿ → s` for `n ≤ k`.  This is the
/// endomorphism theory of the `s`-element set and the standard target
/// for models of a clone.
pub fn set_clone(s: usize, k: usize) -> Multicategory {
    let parts: Vec<BTreeSet<Vec<usize>>> = (0..=k)
        .map(|n| {
            let mut set = BTreeSet::new();
            let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..s.pow(n as u32) {
                acc = acc
                    .into_iter()
                    .flat_map(|t| {
                        (0..s).map(move |v| {
                            let mut t2 = t.clone();
                            t2.push(v);
                            t2
                        })
                    })
                    .collect();
            }
            set.extend(acc);
            set
        })
        .collect();
    clone_theory(s, k, parts, s == 1)
}
