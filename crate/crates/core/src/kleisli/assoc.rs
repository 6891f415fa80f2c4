//! Associativity of `⊙`: mutually inverse cells between the two
//! bracketings of a composable triple, built on canonical representatives.
//!
//! The cells are partial: an entry is present only when re-bracketing the
//! representative stays inside the bound on every intermediate word.  On
//! inputs whose every contributing arity fits the bound, both directions
//! are total and inverse to each other.

use super::{subst_compose, GradedCell, GradedProfunctor, SubstComposite, SubstError, SubstTuple};
use crate::doctrine::Word;
use crate::ids::{ElemId, ObjId};
use std::collections::BTreeMap;

pub struct AssocWitness {
    /// `h ⊙ g`, the outer pair.
    pub hg: SubstComposite,
    /// `g ⊙ f`, the inner pair.
    pub gf: SubstComposite,
    /// `(h ⊙ g) ⊙ f`.
    pub left: SubstComposite,
    /// `h ⊙ (g ⊙ f)`.
    pub right: SubstComposite,
    /// Partial cell `left ⇒ right`.
    pub to_right: GradedCell,
    /// Partial cell `right ⇒ left`.
    pub to_left: GradedCell,
}

pub fn assoc_witness(
    h: &GradedProfunctor,
    g: &GradedProfunctor,
    f: &GradedProfunctor,
) -> Result<AssocWitness, SubstError> {
    let hg = subst_compose(h, g)?;
    let gf = subst_compose(g, f)?;
    let left = subst_compose(&hg.graded, f)?;
    let right = subst_compose(h, &gf.graded)?;
    let k = left.graded.bound;
    debug_assert_eq!(k, right.graded.bound);

    let mut to_right: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>> = BTreeMap::new();
    for (w, a, table) in left.cells() {
        let mut comp = BTreeMap::new();
        for (cls, t) in &table.rep_of {
            if let Some(img) = rebracket_right(t, &hg, &gf, &right, w, a, k) {
                comp.insert(cls.clone(), img.clone());
            }
        }
        to_right.insert((w.clone(), a.clone()), comp);
    }

    let mut to_left: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>> = BTreeMap::new();
    for (w, a, table) in right.cells() {
        let mut comp = BTreeMap::new();
        for (cls, t) in &table.rep_of {
            if let Some(img) = rebracket_left(t, &hg, &gf, &left, w, a, k) {
                comp.insert(cls.clone(), img.clone());
            }
        }
        to_left.insert((w.clone(), a.clone()), comp);
    }

    let to_right = GradedCell {
        source: left.graded.clone(),
        target: right.graded.clone(),
        components: to_right,
    };
    let to_left = GradedCell {
        source: right.graded.clone(),
        target: left.graded.clone(),
        components: to_left,
    };
    Ok(AssocWitness {
        hg,
        gf,
        left,
        right,
        to_right,
        to_left,
    })
}

/// A representative of `(h⊙g)⊙f` has an `hg`-class in each `ys` slot.
/// Unfold those into their own representatives, regroup: the middle word
/// becomes the flattening of the `g`-levels, the `g`-level data forms a
/// `g⊙f` tuple, and the `h`-level blocks concatenate.
fn rebracket_right<'a>(
    t: &SubstTuple,
    hg: &SubstComposite,
    gf: &SubstComposite,
    right: &'a SubstComposite,
    w: &Word,
    a: &ObjId,
    k: usize,
) -> Option<&'a ElemId> {
    let parts: Vec<&SubstTuple> = t
        .ys
        .iter()
        .enumerate()
        .map(|(i, y)| hg.rep(&t.blocks[i], &t.mid.letters()[i], y))
        .collect();
    let mid = Word::new(
        parts
            .iter()
            .flat_map(|p| p.mid.letters().iter().cloned())
            .collect::<Vec<_>>(),
    );
    if mid.len() > k {
        return None;
    }
    let inner_tuple = SubstTuple {
        mid: t.mid.clone(),
        blocks: parts.iter().map(|p| p.mid.clone()).collect(),
        x: t.x.clone(),
        ys: parts.iter().map(|p| p.x.clone()).collect(),
        psi: (0..mid.len()).collect(),
    };
    let x = gf.class(&mid, a, &inner_tuple)?.clone();
    let blocks: Vec<Word> = parts.iter().flat_map(|p| p.blocks.iter().cloned()).collect();
    if blocks.iter().map(Word::len).sum::<usize>() > k {
        return None;
    }
    // Offsets of each part's block row inside `t`'s flattened blocks.
    let mut part_off = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for b in &t.blocks {
        part_off.push(acc);
        acc += b.len();
    }
    let mut psi = Vec::with_capacity(blocks.iter().map(Word::len).sum());
    for (i, p) in parts.iter().enumerate() {
        for &q in &p.psi {
            psi.push(t.psi[part_off[i] + q]);
        }
    }
    let ys: Vec<ElemId> = parts.iter().flat_map(|p| p.ys.iter().cloned()).collect();
    let tuple = SubstTuple {
        mid,
        blocks,
        x,
        ys,
        psi,
    };
    right.class(w, a, &tuple)
}

/// A representative of `h⊙(g⊙f)` has a `gf`-class as its `x`.  Unfold it;
/// its matching tells which of `t`'s blocks feed each `g`-level letter, so
/// the blocks regroup into one `hg` row per `f`-input.
fn rebracket_left<'a>(
    t: &SubstTuple,
    hg: &SubstComposite,
    gf: &SubstComposite,
    left: &'a SubstComposite,
    w: &Word,
    a: &ObjId,
    k: usize,
) -> Option<&'a ElemId> {
    let inner = gf.rep(&t.mid, a, &t.x);
    // Offsets of each block row inside `t`'s flattened blocks.
    let mut block_off = Vec::with_capacity(t.blocks.len());
    let mut acc = 0;
    for b in &t.blocks {
        block_off.push(acc);
        acc += b.len();
    }
    // Offsets of each `inner` block inside `t.mid`.
    let mut mid_off = Vec::with_capacity(inner.blocks.len());
    let mut acc = 0;
    for c in &inner.blocks {
        mid_off.push(acc);
        acc += c.len();
    }
    let mut blocks = Vec::with_capacity(inner.blocks.len());
    let mut ys = Vec::with_capacity(inner.blocks.len());
    let mut psi = Vec::new();
    for (i, c_i) in inner.blocks.iter().enumerate() {
        // The `t.mid` positions feeding the letters of `c_i`.
        let fed: Vec<usize> = (0..c_i.len())
            .map(|s| inner.psi[mid_off[i] + s])
            .collect();
        let grouped = Word::new(
            fed.iter()
                .flat_map(|&j| t.blocks[j].letters().iter().cloned())
                .collect::<Vec<_>>(),
        );
        if grouped.len() > hg.graded.bound {
            return None;
        }
        let row = SubstTuple {
            mid: c_i.clone(),
            blocks: fed.iter().map(|&j| t.blocks[j].clone()).collect(),
            x: inner.ys[i].clone(),
            ys: fed.iter().map(|&j| t.ys[j].clone()).collect(),
            psi: (0..grouped.len()).collect(),
        };
        let y = hg.class(&grouped, &inner.mid.letters()[i], &row)?.clone();
        for &j in &fed {
            for s in 0..t.blocks[j].len() {
                psi.push(t.psi[block_off[j] + s]);
            }
        }
        blocks.push(grouped);
        ys.push(y);
    }
    if blocks.iter().map(Word::len).sum::<usize>() > k {
        return None;
    }
    let tuple = SubstTuple {
        mid: inner.mid.clone(),
        blocks,
        x: inner.x.clone(),
        ys,
        psi,
    };
    if tuple.mid.len() > k {
        return None;
    }
    left.class(w, a, &tuple)
}

impl AssocWitness {
    /// Violations on the defined region: the two directions must invert
    /// each other, and each direction must commute with the actions of the
    /// composite wherever source and image entries are all present.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        check_inverse(&self.to_right, &self.to_left, "to_right", &mut out);
        check_inverse(&self.to_left, &self.to_right, "to_left", &mut out);
        check_natural(&self.to_right, "to_right", &mut out);
        check_natural(&self.to_left, "to_left", &mut out);
        out
    }
}

fn check_inverse(fwd: &GradedCell, bwd: &GradedCell, tag: &str, out: &mut Vec<String>) {
    for ((w, a), comp) in &fwd.components {
        for (x, y) in comp {
            if let Some(back) = bwd.components.get(&(w.clone(), a.clone())).and_then(|c| c.get(y))
            {
                if back != x {
                    out.push(format!("{tag} not inverted at ({w}, {a}): {x} -> {y} -> {back}"));
                }
            } else {
                out.push(format!("{tag} image {y} at ({w}, {a}) has no return entry"));
            }
        }
    }
}

/// Naturality on the defined region: wherever a source element, its
/// image, and both action results all have entries, the square commutes.
fn check_natural(cell: &GradedCell, tag: &str, out: &mut Vec<String>) {
    let src = &cell.source;
    let dst = &cell.target;
    let at = |comp: &BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>>,
              w: &Word,
              a: &ObjId,
              x: &ElemId| {
        comp.get(&(w.clone(), a.clone())).and_then(|c| c.get(x)).cloned()
    };
    for ((w, a), comp) in &cell.components {
        for (x, y) in comp {
            for h in src.words.arities_into(w) {
                let moved = src.left(h, a, x);
                if let Some(img) = at(&cell.components, &h.source, a, moved) {
                    let expect = dst.left(&h, a, y);
                    if &img != expect {
                        out.push(format!(
                            "{tag} does not commute with the {h} action at ({w}, {a})"
                        ));
                    }
                }
            }
            for m in src.source().morphisms() {
                if &m.src != a {
                    continue;
                }
                let moved = src.right(w, &m.id, x);
                if let Some(img) = at(&cell.components, w, &m.dst, moved) {
                    let expect = dst.right(w, &m.id, y);
                    if &img != expect {
                        out.push(format!(
                            "{tag} does not commute with the {} action at ({w}, {a})",
                            m.id
                        ));
                    }
                }
            }
        }
    }
}
