//! The substitution composite `g ⊙ f` of graded profunctors.
//!
//! For `f: A ⇸ SB` and `g: B ⇸ SC`, an element of `(g ⊙ f)(𝐜, a)` is a
//! class of tuples: an `f`-element `x` at some middle word `𝐛`, one
//! `g`-element `yᵢ` at a block word `𝐜ᵢ` for each letter of `𝐛`, and a
//! pure matching `ψ` of `𝐜` against the flattened blocks.  Tuples with a
//! non-identity arrow in the matching are never stored: the arrow part
//! can always be absorbed into the `yᵢ` by the block action, so pure-`ψ`
//! tuples form a complete set of normal forms.
//!
//! The identifications are generated by two move families and closed with
//! union-find:
//!
//! * middle moves: an arity map `β: 𝐛 -> 𝐛'` over `B` transfers between
//!   acting on `x` and acting on the block row (reindexing blocks,
//!   pushing `β`'s arrows into the `yᵢ`, recomposing `ψ`);
//! * block moves: a pure arity map into a single block transfers between
//!   acting on that `yᵢ` and rerouting `ψ` through the block.
//!
//! A test compares the resulting partition against an independent closure
//! over the raw (impure-`ψ`) tuple space, which is the defining relation
//! spelled out with no normal-form reasoning at all.
//!
//! Classes whose construction would need an intermediate word longer than
//! the bound are absent; the composite records the bound it is exact under.

use super::{GradedCell, GradedProfunctor};
use crate::doctrine::{
    flatten_with_offsets, mult_flatten, pure_index_maps, s_hom, s_objects_upto, ArityMap,
    Doctrine, SCategory, Word,
};
use crate::fincat::FinCategory;
use crate::ids::{ElemId, ObjId};
use crate::util::{esc, UnionFind};
use itertools::Itertools;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::Arc;

/// A normal-form tuple: field order is the canonical (lexicographic)
/// representative order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubstTuple {
    /// The middle word `𝐛` over `B`.
    pub mid: Word,
    /// One block word over `C` per letter of `mid`.
    pub blocks: Vec<Word>,
    /// The `f`-element at `(mid, a)`.
    pub x: ElemId,
    /// `ys[i]` is a `g`-element at `(blocks[i], mid[i])`.
    pub ys: Vec<ElemId>,
    /// Pure matching: position `p` of the flattened blocks is fed by
    /// position `psi[p]` of the cell word `𝐜`.
    pub psi: Vec<usize>,
}

impl SubstTuple {
    fn class_id(&self) -> ElemId {
        let blocks = self.blocks.iter().map(|w| esc(&w.key())).join("|");
        let ys = self.ys.iter().map(|y| esc(y.as_str())).join("|");
        let psi = self.psi.iter().join(",");
        ElemId::new(format!(
            "[{}|{}|{}|{}|{}]",
            esc(&self.mid.key()),
            esc(&blocks),
            esc(self.x.as_str()),
            esc(&ys),
            psi
        ))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SubstTable {
    pub class_of: BTreeMap<SubstTuple, ElemId>,
    pub rep_of: BTreeMap<ElemId, SubstTuple>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("doctrines differ")]
    DoctrineMismatch,
    #[error("the inner target base and outer source categories differ")]
    BoundaryMismatch,
}

/// `outer ⊙ inner` together with its tuple tables.
#[derive(Debug, Clone)]
pub struct SubstComposite {
    pub outer: GradedProfunctor,
    pub inner: GradedProfunctor,
    /// The composite itself, exact up to its recorded bound.
    pub graded: GradedProfunctor,
    tables: BTreeMap<(Word, ObjId), SubstTable>,
}

impl SubstComposite {
    pub fn class(&self, w: &Word, a: &ObjId, t: &SubstTuple) -> Option<&ElemId> {
        self.tables
            .get(&(w.clone(), a.clone()))
            .and_then(|table| table.class_of.get(t))
    }

    pub fn rep(&self, w: &Word, a: &ObjId, class: &ElemId) -> &SubstTuple {
        &self.tables[&(w.clone(), a.clone())].rep_of[class]
    }

    pub fn table(&self, w: &Word, a: &ObjId) -> Option<&SubstTable> {
        self.tables.get(&(w.clone(), a.clone()))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Word, &ObjId, &SubstTable)> {
        self.tables.iter().map(|((w, a), t)| (w, a, t))
    }
}

type Config = (Vec<Word>, Vec<ElemId>);

/// Enumerate `(blocks, ys)` rows for `mid`: per letter one `g`-cell with
/// one element, total block length ≤ `k`.
fn block_configs(
    mid: &Word,
    options: &BTreeMap<ObjId, Vec<(Word, ElemId)>>,
    k: usize,
) -> Vec<Config> {
    let mut acc: Vec<(Vec<Word>, Vec<ElemId>, usize)> = vec![(Vec::new(), Vec::new(), 0)];
    for letter in mid.letters() {
        let mut next = Vec::new();
        for (blocks, ys, sum) in &acc {
            for (w, y) in &options[letter] {
                if sum + w.len() > k {
                    continue;
                }
                let mut blocks = blocks.clone();
                let mut ys = ys.clone();
                blocks.push(w.clone());
                ys.push(y.clone());
                next.push((blocks, ys, sum + w.len()));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(b, y, _)| (b, y)).collect()
}

struct PureCache {
    cache: BTreeMap<(Word, Word), Rc<Vec<Vec<usize>>>>,
    doctrine: Doctrine,
}

impl PureCache {
    fn get(&mut self, source: &Word, target: &Word) -> Rc<Vec<Vec<usize>>> {
        self.cache
            .entry((source.clone(), target.clone()))
            .or_insert_with(|| Rc::new(pure_index_maps(self.doctrine, source, target)))
            .clone()
    }
}

pub fn subst_compose(
    outer: &GradedProfunctor,
    inner: &GradedProfunctor,
) -> Result<SubstComposite, SubstError> {
    if outer.doctrine != inner.doctrine {
        return Err(SubstError::DoctrineMismatch);
    }
    if inner.base_target() != outer.source() {
        return Err(SubstError::BoundaryMismatch);
    }
    let d = inner.doctrine;
    let k = inner.bound.min(outer.bound);
    let a_cat = inner.source().clone();
    let b_cat = outer.source().clone();
    let c_words = if outer.bound == k {
        outer.words.clone()
    } else {
        SCategory::new(outer.words.base.clone(), d, k)
    };
    let c_cat = c_words.base.clone();

    let words_b = s_objects_upto(&b_cat, k);
    let words_c: Vec<Word> = c_words.words().cloned().collect();

    // All (block, element) options of the outer profunctor, per B-object.
    let mut options: BTreeMap<ObjId, Vec<(Word, ElemId)>> = b_cat
        .objects()
        .iter()
        .map(|b| (b.clone(), Vec::new()))
        .collect();
    for (w, b, elems) in outer.cells() {
        if w.len() <= k {
            for y in elems {
                options.get_mut(b).unwrap().push((w.clone(), y.clone()));
            }
        }
    }
    let configs: BTreeMap<Word, Vec<Config>> = words_b
        .iter()
        .map(|mid| (mid.clone(), block_configs(mid, &options, k)))
        .collect();
    let arities_b: Vec<ArityMap> = words_b
        .iter()
        .cartesian_product(words_b.iter())
        .flat_map(|(x, y)| s_hom(&b_cat, d, x, y))
        .collect();
    let mut pure = PureCache {
        cache: BTreeMap::new(),
        doctrine: d,
    };

    let mut tables: BTreeMap<(Word, ObjId), SubstTable> = BTreeMap::new();
    for a in a_cat.objects() {
        for cw in &words_c {
            let table = subst_cell(
                inner, outer, d, k, a, cw, &words_b, &configs, &arities_b, &c_cat, &mut pure,
            );
            if !table.rep_of.is_empty() {
                tables.insert((cw.clone(), a.clone()), table);
            }
        }
    }

    // Assemble the composite as a graded profunctor: cells are the class
    // ids, actions act on canonical representatives and re-canonicalize.
    let cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = tables
        .iter()
        .map(|(key, t)| (key.clone(), t.rep_of.keys().cloned().collect()))
        .collect();
    let lookup = |w: &Word, a: &ObjId, t: &SubstTuple| -> ElemId {
        tables[&(w.clone(), a.clone())]
            .class_of
            .get(t)
            .unwrap_or_else(|| panic!("substitution class lookup failed at ({w}, {a})"))
            .clone()
    };
    let graded = GradedProfunctor::from_actions_with(
        c_words.clone(),
        a_cat.clone(),
        cells,
        |h, a, cls| {
            let t = &tables[&(h.target.clone(), a.clone())].rep_of[cls];
            let moved = act_left(t, h, outer, &c_cat, d);
            lookup(&h.source, a, &moved)
        },
        |w, alpha, cls| {
            let t = &tables[&(w.clone(), a_cat.mor(alpha).unwrap().src.clone())].rep_of[cls];
            let mut moved = t.clone();
            moved.x = inner.right(&t.mid, alpha, &t.x).clone();
            lookup(w, &a_cat.mor(alpha).unwrap().dst, &moved)
        },
    )
    .expect("composite tables are well formed");

    Ok(SubstComposite {
        outer: outer.clone(),
        inner: inner.clone(),
        graded,
        tables,
    })
}

/// The action of `⊙` on 2-cells: from `p: g ⇒ g'` and `q: f ⇒ f'`
/// build `p ⊙ q: g ⊙ f ⇒ g' ⊙ f'` by mapping each representative
/// tuple componentwise (`q` on the middle element, `p` on each block).
///
/// `source` must be a composite of `p.source`/`q.source` and `target`
/// one of `p.target`/`q.target`; panics otherwise, or when a mapped
/// tuple has no class in `target` (impossible when the cells commute
/// with the actions).
pub fn subst_compose_cells(
    source: &SubstComposite,
    outer: &GradedCell,
    inner: &GradedCell,
    target: &SubstComposite,
) -> GradedCell {
    assert_eq!(outer.source, source.outer, "outer cell source mismatch");
    assert_eq!(outer.target, target.outer, "outer cell target mismatch");
    assert_eq!(inner.source, source.inner, "inner cell source mismatch");
    assert_eq!(inner.target, target.inner, "inner cell target mismatch");
    GradedCell::from_fn(&source.graded, &target.graded, |w, a, cls| {
        let t = source.rep(w, a, cls);
        let ys = t
            .ys
            .iter()
            .zip(t.blocks.iter().zip(t.mid.letters()))
            .map(|(y, (block, b))| outer.apply(block, b, y).clone())
            .collect();
        let image = SubstTuple {
            mid: t.mid.clone(),
            blocks: t.blocks.clone(),
            x: inner.apply(&t.mid, a, &t.x).clone(),
            ys,
            psi: t.psi.clone(),
        };
        target
            .class(w, a, &image)
            .unwrap_or_else(|| panic!("whiskered tuple has no class at ({w}, {a})"))
            .clone()
    })
}

/// Left action of an arbitrary (possibly impure) arity map `h: 𝐜' -> 𝐜`
/// on a normal tuple at `𝐜`: recompose the matching, then absorb its
/// arrow part into the block elements to restore the normal form.
fn act_left(
    t: &SubstTuple,
    h: &ArityMap,
    outer: &GradedProfunctor,
    c_cat: &Arc<FinCategory>,
    d: Doctrine,
) -> SubstTuple {
    let (flat, offsets) = flatten_with_offsets(&t.blocks);
    let psi_map = ArityMap::pure(d, h.target.clone(), flat, t.psi.clone(), c_cat)
        .expect("stored matching is pure");
    let w = psi_map.compose(h, c_cat);
    let mut blocks = Vec::with_capacity(t.blocks.len());
    let mut ys = Vec::with_capacity(t.ys.len());
    for (j, block) in t.blocks.iter().enumerate() {
        let range = offsets[j]..offsets[j] + block.len();
        let letters = w.index[range.clone()]
            .iter()
            .map(|&i| h.source.letters()[i].clone());
        let low = Word::new(letters);
        let absorb = ArityMap::new(
            d,
            low.clone(),
            block.clone(),
            (0..block.len()).collect(),
            w.arrows[range].to_vec(),
            c_cat,
        )
        .expect("absorbed arrows are slotwise");
        ys.push(outer.left(&absorb, &t.mid.letters()[j], &t.ys[j]).clone());
        blocks.push(low);
    }
    SubstTuple {
        mid: t.mid.clone(),
        blocks,
        x: t.x.clone(),
        ys,
        psi: w.index,
    }
}

#[allow(clippy::too_many_arguments)]
fn subst_cell(
    inner: &GradedProfunctor,
    outer: &GradedProfunctor,
    d: Doctrine,
    k: usize,
    a: &ObjId,
    cw: &Word,
    words_b: &[Word],
    configs: &BTreeMap<Word, Vec<Config>>,
    arities_b: &[ArityMap],
    c_cat: &Arc<FinCategory>,
    pure: &mut PureCache,
) -> SubstTable {
    // Enumerate normal tuples for this cell.
    let mut index: BTreeMap<SubstTuple, usize> = BTreeMap::new();
    for mid in words_b {
        let xs = inner.elems(mid, a);
        if xs.is_empty() {
            continue;
        }
        for (blocks, ys) in &configs[mid] {
            let flat = mult_flatten(blocks);
            for psi in pure.get(cw, &flat).iter() {
                for x in xs {
                    let t = SubstTuple {
                        mid: mid.clone(),
                        blocks: blocks.clone(),
                        x: x.clone(),
                        ys: ys.clone(),
                        psi: psi.clone(),
                    };
                    index.entry(t).or_insert(0);
                }
            }
        }
    }
    let nodes: Vec<SubstTuple> = index.keys().cloned().collect();
    for (i, t) in nodes.iter().enumerate() {
        *index.get_mut(t).unwrap() = i;
    }
    let mut uf = UnionFind::new(nodes.len());
    let at = |index: &BTreeMap<SubstTuple, usize>, t: &SubstTuple| -> usize {
        *index
            .get(t)
            .unwrap_or_else(|| panic!("move leaves the enumerated tuple space: {t:?}"))
    };

    // Middle moves along every arity map β: 𝐛 -> 𝐛' over B.
    for beta in arities_b {
        let xs_dst = inner.elems(&beta.target, a);
        if xs_dst.is_empty() {
            continue;
        }
        for (blocks, ys) in &configs[&beta.source] {
            let blocks_d: Vec<Word> = beta.index.iter().map(|&i| blocks[i].clone()).collect();
            if blocks_d.iter().map(Word::len).sum::<usize>() > k {
                continue;
            }
            let ys_d: Vec<ElemId> = beta
                .index
                .iter()
                .zip(&beta.arrows)
                .map(|(&i, arrow)| outer.right(&blocks[i], arrow, &ys[i]).clone())
                .collect();
            let (flat_s, off_s) = flatten_with_offsets(blocks);
            let (_, off_d) = flatten_with_offsets(&blocks_d);
            for psi_s in pure.get(cw, &flat_s).iter() {
                let mut psi_d = vec![0; blocks_d.iter().map(Word::len).sum::<usize>()];
                for (j, &i) in beta.index.iter().enumerate() {
                    for t in 0..blocks_d[j].len() {
                        psi_d[off_d[j] + t] = psi_s[off_s[i] + t];
                    }
                }
                for x in xs_dst {
                    let moved_x = inner.left(beta, a, x);
                    let lower = SubstTuple {
                        mid: beta.source.clone(),
                        blocks: blocks.clone(),
                        x: moved_x.clone(),
                        ys: ys.clone(),
                        psi: psi_s.clone(),
                    };
                    let upper = SubstTuple {
                        mid: beta.target.clone(),
                        blocks: blocks_d.clone(),
                        x: x.clone(),
                        ys: ys_d.clone(),
                        psi: psi_d.clone(),
                    };
                    uf.union(at(&index, &lower), at(&index, &upper));
                }
            }
        }
    }

    // Block moves along pure maps into a single block.
    for mid in words_b {
        let xs = inner.elems(mid, a);
        if xs.is_empty() {
            continue;
        }
        for (blocks, ys) in &configs[mid] {
            let sum: usize = blocks.iter().map(Word::len).sum();
            for i in 0..blocks.len() {
                for low_word in outer.words.words() {
                    if sum - blocks[i].len() + low_word.len() > k {
                        continue;
                    }
                    for gamma_idx in pure.get(low_word, &blocks[i]).iter() {
                        let gamma = ArityMap::pure(
                            d,
                            low_word.clone(),
                            blocks[i].clone(),
                            gamma_idx.clone(),
                            c_cat,
                        )
                        .expect("enumerated matchings are pure");
                        let y_low = outer.left(&gamma, &mid.letters()[i], &ys[i]).clone();
                        let mut blocks_low = blocks.clone();
                        blocks_low[i] = low_word.clone();
                        let mut ys_low = ys.clone();
                        ys_low[i] = y_low;
                        let (flat_low, off_low) = flatten_with_offsets(&blocks_low);
                        let (_, off_up) = flatten_with_offsets(blocks);
                        // Reroute each upper flat position through γ.
                        let mut route = vec![0; sum];
                        for (j, block) in blocks.iter().enumerate() {
                            for t in 0..block.len() {
                                route[off_up[j] + t] = if j == i {
                                    off_low[i] + gamma_idx[t]
                                } else {
                                    off_low[j] + t
                                };
                            }
                        }
                        for psi_low in pure.get(cw, &flat_low).iter() {
                            let psi_up: Vec<usize> =
                                route.iter().map(|&p| psi_low[p]).collect();
                            for x in xs {
                                let lower = SubstTuple {
                                    mid: mid.clone(),
                                    blocks: blocks_low.clone(),
                                    x: x.clone(),
                                    ys: ys_low.clone(),
                                    psi: psi_low.clone(),
                                };
                                let upper = SubstTuple {
                                    mid: mid.clone(),
                                    blocks: blocks.clone(),
                                    x: x.clone(),
                                    ys: ys.clone(),
                                    psi: psi_up.clone(),
                                };
                                uf.union(at(&index, &lower), at(&index, &upper));
                            }
                        }
                    }
                }
            }
        }
    }

    // Canonical representatives: least tuple of each class.
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in index.values() {
        members.entry(uf.find(i)).or_default().push(i);
    }
    let mut table = SubstTable::default();
    for group in members.values() {
        let rep = group.iter().map(|&i| &nodes[i]).min().unwrap().clone();
        let id = rep.class_id();
        for &i in group {
            table.class_of.insert(nodes[i].clone(), id.clone());
        }
        table.rep_of.insert(id, rep);
    }
    table
}

