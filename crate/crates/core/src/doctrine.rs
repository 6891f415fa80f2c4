//! Words over a category and the three arity disciplines.
//!
//! A *word* is a finite list of objects; words of length ≤ K are the
//! objects of the free strict-monoidal-like category on a base category,
//! graded by length so nothing infinite is ever materialized.  A doctrine
//! picks the shape of morphisms between words:
//!
//! * `Planar`: words of equal length, matched position by position;
//! * `Symmetric`: a bijective matching of positions;
//! * `Cartesian`: any function from target positions to source positions,
//!   so positions may be duplicated or dropped.
//!
//! An [`ArityMap`] stores the matching as `index: Vec<usize>` — `index[j]`
//! is the source position feeding target position `j` — together with one
//! base-category arrow per target position, from the matched source letter
//! to the target letter.  Storing the function in the target→source
//! direction makes all three doctrines the same data with progressively
//! weaker side conditions, and the planar/symmetric/cartesian inclusions
//! are literally the identity on that data ([`ArityMap::promote`]).

use crate::fincat::{FinCategory, Functor, Mor};
use crate::ids::{MorId, ObjId};
use crate::util::esc;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Doctrine {
    Planar,
    Symmetric,
    Cartesian,
}

impl Doctrine {
    pub const ALL: [Doctrine; 3] = [Doctrine::Planar, Doctrine::Symmetric, Doctrine::Cartesian];

    /// Every shape legal in `smaller` is legal in `self`.
    pub fn includes(self, smaller: Doctrine) -> bool {
        smaller <= self
    }
}

impl fmt::Display for Doctrine {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Doctrine::Planar => write!(out, "planar"),
            Doctrine::Symmetric => write!(out, "symmetric"),
            Doctrine::Cartesian => write!(out, "cartesian"),
        }
    }
}

impl std::str::FromStr for Doctrine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "planar" => Ok(Doctrine::Planar),
            "symmetric" => Ok(Doctrine::Symmetric),
            "cartesian" => Ok(Doctrine::Cartesian),
            other => Err(format!(
                "unknown doctrine {other:?} (expected planar, symmetric, or cartesian)"
            )),
        }
    }
}

/// A finite list of objects.  Ordered by length first, then letterwise, so
/// enumerations graded by length read naturally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<ObjId>,
}

impl Word {
    pub fn new(letters: impl IntoIterator<Item = ObjId>) -> Self {
        Word {
            letters: letters.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn singleton(obj: ObjId) -> Self {
        Word { letters: vec![obj] }
    }

    pub fn letters(&self) -> &[ObjId] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .chain(&other.letters)
                .cloned()
                .collect(),
        }
    }

    /// All letters are objects of `cat`.
    pub fn is_over(&self, cat: &FinCategory) -> bool {
        self.letters.iter().all(|l| cat.has_object(l))
    }

    /// Stable textual form, with letters escaped and `|`-joined (so a
    /// letter containing the separator cannot collide with two letters).
    pub fn key(&self) -> String {
        self.letters.iter().map(|l| esc(l.as_str())).join("|")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({})", self.letters.iter().join(","))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The unit inclusion of an object as a one-letter word.
pub fn unit_embed(obj: &ObjId) -> Word {
    Word::singleton(obj.clone())
}

/// The multiplication: flatten a word of words by concatenation.
pub fn mult_flatten<'w>(words: impl IntoIterator<Item = &'w Word>) -> Word {
    Word {
        letters: words
            .into_iter()
            .flat_map(|w| w.letters.iter().cloned())
            .collect(),
    }
}

/// Flatten a block list and report each block's offset in the result.
pub fn flatten_with_offsets(blocks: &[Word]) -> (Word, Vec<usize>) {
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut at = 0;
    for b in blocks {
        offsets.push(at);
        at += b.len();
    }
    (mult_flatten(blocks), offsets)
}

/// All words of length ≤ `k` over the objects of `cat`, in the global
/// (length, letterwise) order.  The same list serves every doctrine.
pub fn s_objects_upto(cat: &FinCategory, k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 0..=k {
        for letters in product(&vec![cat.objects().to_vec(); len]) {
            out.push(Word::new(letters));
        }
    }
    out
}

/// Cartesian product of choice lists; the empty family yields one empty
/// pick (unlike `multi_cartesian_product`, which yields none).
fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(acc.len() * c.len());
        for partial in &acc {
            for item in c {
                let mut v = partial.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ArityError {
    #[error("index has {got} entries for a target of length {want}")]
    IndexLength { got: usize, want: usize },
    #[error("index entry {entry} is out of range for a source of length {len}")]
    IndexRange { entry: usize, len: usize },
    #[error("planar maps require equal lengths and the identity matching")]
    NotPlanar,
    #[error("symmetric maps require a bijective matching")]
    NotBijective,
    #[error("arrow {mor} at position {at} has the wrong endpoints")]
    ArrowEndpoints { mor: MorId, at: usize },
    #[error("arrow {0} is not a morphism of the base category")]
    UnknownArrow(MorId),
    #[error("word contains a letter outside the base category")]
    LetterOutsideBase,
    #[error("{0} map cannot be read as {1}")]
    CannotPromote(Doctrine, Doctrine),
}

/// A morphism of words: a doctrine-shaped matching of positions plus one
/// base arrow per target position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArityMap {
    pub doctrine: Doctrine,
    pub source: Word,
    pub target: Word,
    /// `index[j]` = source position matched to target position `j`.
    pub index: Vec<usize>,
    /// `arrows[j]: source[index[j]] -> target[j]` in the base category.
    pub arrows: Vec<MorId>,
}

impl ArityMap {
    pub fn new(
        doctrine: Doctrine,
        source: Word,
        target: Word,
        index: Vec<usize>,
        arrows: Vec<MorId>,
        cat: &FinCategory,
    ) -> Result<Self, ArityError> {
        if !source.is_over(cat) || !target.is_over(cat) {
            return Err(ArityError::LetterOutsideBase);
        }
        if index.len() != target.len() || arrows.len() != target.len() {
            return Err(ArityError::IndexLength {
                got: index.len().max(arrows.len()),
                want: target.len(),
            });
        }
        for &i in &index {
            if i >= source.len() {
                return Err(ArityError::IndexRange {
                    entry: i,
                    len: source.len(),
                });
            }
        }
        match doctrine {
            Doctrine::Planar => {
                if source.len() != target.len() || index.iter().enumerate().any(|(j, &i)| i != j) {
                    return Err(ArityError::NotPlanar);
                }
            }
            Doctrine::Symmetric => {
                let mut seen = vec![false; source.len()];
                if source.len() != target.len() {
                    return Err(ArityError::NotBijective);
                }
                for &i in &index {
                    if seen[i] {
                        return Err(ArityError::NotBijective);
                    }
                    seen[i] = true;
                }
            }
            Doctrine::Cartesian => {}
        }
        for (j, mor) in arrows.iter().enumerate() {
            let Some(m) = cat.mor(mor) else {
                return Err(ArityError::UnknownArrow(mor.clone()));
            };
            if m.src != source.letters()[index[j]] || m.dst != target.letters()[j] {
                return Err(ArityError::ArrowEndpoints {
                    mor: mor.clone(),
                    at: j,
                });
            }
        }
        Ok(ArityMap {
            doctrine,
            source,
            target,
            index,
            arrows,
        })
    }

    pub fn identity(doctrine: Doctrine, word: Word, cat: &FinCategory) -> ArityMap {
        let arrows = word
            .letters()
            .iter()
            .map(|l| cat.identity(l).clone())
            .collect();
        ArityMap {
            doctrine,
            source: word.clone(),
            target: word,
            index: (0..0).collect::<Vec<_>>(),
            arrows,
        }
        .with_identity_index()
    }

    fn with_identity_index(mut self) -> ArityMap {
        self.index = (0..self.target.len()).collect();
        self
    }

    /// A map whose arrows are all identities: a pure reindexing.
    pub fn pure(
        doctrine: Doctrine,
        source: Word,
        target: Word,
        index: Vec<usize>,
        cat: &FinCategory,
    ) -> Result<ArityMap, ArityError> {
        let arrows = index
            .iter()
            .map(|&i| {
                source
                    .letters()
                    .get(i)
                    .map(|l| cat.identity(l).clone())
                    .ok_or(ArityError::IndexRange {
                        entry: i,
                        len: source.len(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ArityMap::new(doctrine, source, target, index, arrows, cat)
    }

    pub fn is_pure(&self, cat: &FinCategory) -> bool {
        self.arrows
            .iter()
            .zip(&self.index)
            .all(|(a, &i)| a == cat.identity(&self.source.letters()[i]))
    }

    /// `self ∘ earlier`: apply `earlier` first.
    pub fn compose(&self, earlier: &ArityMap, cat: &FinCategory) -> ArityMap {
        assert_eq!(self.source, earlier.target, "arity maps not composable");
        assert_eq!(self.doctrine, earlier.doctrine, "doctrine mismatch");
        let index: Vec<usize> = self.index.iter().map(|&j| earlier.index[j]).collect();
        let arrows: Vec<MorId> = self
            .index
            .iter()
            .zip(&self.arrows)
            .map(|(&j, late)| {
                cat.compose(late, &earlier.arrows[j])
                    .expect("letter arrows compose")
                    .clone()
            })
            .collect();
        ArityMap {
            doctrine: self.doctrine,
            source: earlier.source.clone(),
            target: self.target.clone(),
            index,
            arrows,
        }
    }

    /// Side-by-side juxtaposition: `(self ⊕ other)` on concatenated words.
    pub fn juxtapose(&self, other: &ArityMap) -> ArityMap {
        assert_eq!(self.doctrine, other.doctrine, "doctrine mismatch");
        let shift = self.source.len();
        let index = self
            .index
            .iter()
            .copied()
            .chain(other.index.iter().map(|&i| i + shift))
            .collect();
        let arrows = self
            .arrows
            .iter()
            .chain(&other.arrows)
            .cloned()
            .collect();
        ArityMap {
            doctrine: self.doctrine,
            source: self.source.concat(&other.source),
            target: self.target.concat(&other.target),
            index,
            arrows,
        }
    }

    /// Reinterpret in a weaker discipline (planar → symmetric → cartesian).
    /// The data is unchanged; only the tag moves.
    pub fn promote(&self, to: Doctrine) -> Result<ArityMap, ArityError> {
        if !to.includes(self.doctrine) {
            return Err(ArityError::CannotPromote(self.doctrine, to));
        }
        let mut out = self.clone();
        out.doctrine = to;
        Ok(out)
    }

    /// Stable textual name: the index and the escaped arrow ids.
    pub fn name(&self) -> String {
        format!(
            "s({};{})",
            self.index.iter().join(","),
            self.arrows.iter().map(|a| esc(a.as_str())).join("|")
        )
    }
}

impl fmt::Display for ArityMap {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}: {} -> {}", self.name(), self.source, self.target)
    }
}

/// Every arity map `x -> y` in the given doctrine, in a deterministic
/// order (index data first, then arrow choices).
pub fn s_hom(cat: &FinCategory, d: Doctrine, x: &Word, y: &Word) -> Vec<ArityMap> {
    let (m, n) = (x.len(), y.len());
    let indices: Vec<Vec<usize>> = match d {
        Doctrine::Planar => {
            if m != n {
                return Vec::new();
            }
            vec![(0..n).collect()]
        }
        Doctrine::Symmetric => {
            if m != n {
                return Vec::new();
            }
            if m == 0 {
                vec![Vec::new()]
            } else {
                (0..m).permutations(m).collect()
            }
        }
        Doctrine::Cartesian => product(&vec![(0..m).collect::<Vec<usize>>(); n]),
    };
    let mut out = Vec::new();
    for index in indices {
        let arrow_choices: Vec<Vec<MorId>> = (0..n)
            .map(|j| {
                cat.hom(&x.letters()[index[j]], &y.letters()[j])
                    .into_iter()
                    .cloned()
                    .collect()
            })
            .collect();
        for arrows in product(&arrow_choices) {
            out.push(ArityMap {
                doctrine: d,
                source: x.clone(),
                target: y.clone(),
                index: index.clone(),
                arrows,
            });
        }
    }
    out
}

/// Index vectors of the *pure* maps `source -> target` in doctrine `d`:
/// letter-preserving position matchings with identity arrows.  Entry `j`
/// of a result is the source position feeding target position `j`.
pub fn pure_index_maps(d: Doctrine, source: &Word, target: &Word) -> Vec<Vec<usize>> {
    match d {
        Doctrine::Planar => {
            if source == target {
                vec![(0..target.len()).collect()]
            } else {
                Vec::new()
            }
        }
        Doctrine::Symmetric => {
            if source.len() != target.len() {
                return Vec::new();
            }
            let slots: Vec<Vec<usize>> = letter_slots(source, target);
            product(&slots)
                .into_iter()
                .filter(|index| {
                    let mut seen = vec![false; source.len()];
                    index.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
                })
                .collect()
        }
        Doctrine::Cartesian => product(&letter_slots(source, target)),
    }
}

fn letter_slots(source: &Word, target: &Word) -> Vec<Vec<usize>> {
    target
        .letters()
        .iter()
        .map(|t| {
            source
                .letters()
                .iter()
                .enumerate()
                .filter(|(_, s)| *s == t)
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

/// Apply a base functor letterwise to a word.
pub fn map_word(f: &Functor, w: &Word) -> Word {
    Word::new(w.letters().iter().map(|l| f.on_obj(l).clone()))
}

/// Apply a base functor to an arity map: letters and arrows through `f`,
/// matching data untouched.
pub fn map_arity(f: &Functor, am: &ArityMap) -> ArityMap {
    ArityMap {
        doctrine: am.doctrine,
        source: map_word(f, &am.source),
        target: map_word(f, &am.target),
        index: am.index.clone(),
        arrows: am.arrows.iter().map(|a| f.on_mor(a).clone()).collect(),
    }
}

/// The category of words of length ≤ `bound` and arity maps, materialized
/// as an ordinary [`FinCategory`] so the profunctor machinery applies to
/// it unchanged.  Keeps the dictionaries between words/arity maps and the
/// generated object/morphism ids.
#[derive(Debug, Clone)]
pub struct SCategory {
    pub doctrine: Doctrine,
    pub bound: usize,
    pub base: Arc<FinCategory>,
    pub cat: Arc<FinCategory>,
    obj_of: BTreeMap<Word, ObjId>,
    word_of: BTreeMap<ObjId, Word>,
    mor_of: BTreeMap<ArityMap, MorId>,
    map_of: BTreeMap<MorId, ArityMap>,
}

impl PartialEq for SCategory {
    fn eq(&self, other: &Self) -> bool {
        self.doctrine == other.doctrine && self.bound == other.bound && self.base == other.base
    }
}
impl Eq for SCategory {}

impl SCategory {
    pub fn new(base: Arc<FinCategory>, doctrine: Doctrine, bound: usize) -> SCategory {
        let words = s_objects_upto(&base, bound);
        let mut obj_of = BTreeMap::new();
        let mut word_of = BTreeMap::new();
        for w in &words {
            let id = ObjId::new(format!("[{}]", w.key()));
            obj_of.insert(w.clone(), id.clone());
            word_of.insert(id, w.clone());
        }
        let mut mor_of = BTreeMap::new();
        let mut map_of = BTreeMap::new();
        let mut mors = Vec::new();
        let mut by_endpoints: BTreeMap<(usize, usize), Vec<ArityMap>> = BTreeMap::new();
        for (i, x) in words.iter().enumerate() {
            for (j, y) in words.iter().enumerate() {
                let maps = s_hom(&base, doctrine, x, y);
                for am in &maps {
                    let id = MorId::new(format!(
                        "am({}|{}|{})",
                        esc(&x.key()),
                        esc(&y.key()),
                        esc(&am.name())
                    ));
                    mors.push(Mor {
                        id: id.clone(),
                        src: obj_of[x].clone(),
                        dst: obj_of[y].clone(),
                    });
                    mor_of.insert(am.clone(), id.clone());
                    map_of.insert(id, am.clone());
                }
                by_endpoints.insert((i, j), maps);
            }
        }
        let identity: Vec<(ObjId, MorId)> = words
            .iter()
            .map(|w| {
                let id_map = ArityMap::identity(doctrine, w.clone(), &base);
                (obj_of[w].clone(), mor_of[&id_map].clone())
            })
            .collect();
        let mut compose = Vec::new();
        for (i, _) in words.iter().enumerate() {
            for (j, _) in words.iter().enumerate() {
                for (k, _) in words.iter().enumerate() {
                    for f in &by_endpoints[&(i, j)] {
                        for g in &by_endpoints[&(j, k)] {
                            let gf = g.compose(f, &base);
                            compose.push(((mor_of[g].clone(), mor_of[f].clone()), mor_of[&gf].clone()));
                        }
                    }
                }
            }
        }
        let cat = FinCategory::new(word_of.keys().cloned().collect::<Vec<_>>(), mors, identity, compose)
            .expect("word category is well formed");
        SCategory {
            doctrine,
            bound,
            base,
            cat: Arc::new(cat),
            obj_of,
            word_of,
            mor_of,
            map_of,
        }
    }

    pub fn obj(&self, w: &Word) -> &ObjId {
        &self.obj_of[w]
    }

    pub fn try_obj(&self, w: &Word) -> Option<&ObjId> {
        self.obj_of.get(w)
    }

    pub fn word(&self, o: &ObjId) -> &Word {
        &self.word_of[o]
    }

    pub fn mor(&self, am: &ArityMap) -> &MorId {
        &self.mor_of[am]
    }

    pub fn try_mor(&self, am: &ArityMap) -> Option<&MorId> {
        self.mor_of.get(am)
    }

    pub fn arity(&self, m: &MorId) -> &ArityMap {
        &self.map_of[m]
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.obj_of.keys()
    }

    /// Every arity map whose target is `w` (any source word in range).
    pub fn arities_into<'a>(&'a self, w: &'a Word) -> impl Iterator<Item = &'a ArityMap> {
        self.mor_of.keys().filter(move |am| &am.target == w)
    }
}

/// The word-level functor induced by a base functor: letterwise on words,
/// arrow-wise on arity maps, between materialized word categories.
pub fn s_functor(f: &Functor, source: &SCategory, target: &SCategory) -> Functor {
    assert_eq!(source.doctrine, target.doctrine, "doctrine mismatch");
    assert!(source.bound <= target.bound, "bound would be exceeded");
    let object_map = source
        .words()
        .map(|w| (source.obj(w).clone(), target.obj(&map_word(f, w)).clone()));
    let morphism_map = source
        .cat
        .morphisms()
        .iter()
        .map(|m| {
            let am = source.arity(&m.id);
            (m.id.clone(), target.mor(&map_arity(f, am)).clone())
        })
        .collect::<Vec<_>>();
    Functor::new(source.cat.clone(), target.cat.clone(), object_map, morphism_map)
        .expect("word-level functor is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategory, Mor};
    use std::sync::Arc;

    fn o(s: &str) -> ObjId {
        ObjId::new(s)
    }
    fn m(s: &str) -> MorId {
        MorId::new(s)
    }

    fn one_obj() -> FinCategory {
        FinCategory::discrete([o("x")])
    }

    fn two_chain() -> FinCategory {
        FinCategory::new(
            [o("a"), o("b")],
            [
                Mor { id: m("id_a"), src: o("a"), dst: o("a") },
                Mor { id: m("id_b"), src: o("b"), dst: o("b") },
                Mor { id: m("f"), src: o("a"), dst: o("b") },
            ],
            [(o("a"), m("id_a")), (o("b"), m("id_b"))],
            [
                ((m("id_a"), m("id_a")), m("id_a")),
                ((m("id_b"), m("id_b")), m("id_b")),
                ((m("f"), m("id_a")), m("f")),
                ((m("id_b"), m("f")), m("f")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn word_order_is_graded() {
        let a = Word::new([o("a")]);
        let b = Word::new([o("b")]);
        let aa = Word::new([o("a"), o("a")]);
        let mut v = vec![aa.clone(), b.clone(), Word::empty(), a.clone()];
        v.sort();
        assert_eq!(v, vec![Word::empty(), a, b, aa]);
    }

    #[test]
    fn empty_category_has_one_word_and_one_map() {
        let cat = FinCategory::empty();
        let words = s_objects_upto(&cat, 3);
        assert_eq!(words, vec![Word::empty()]);
        for d in Doctrine::ALL {
            let maps = s_hom(&cat, d, &Word::empty(), &Word::empty());
            assert_eq!(maps.len(), 1, "{d}");
        }
    }

    #[test]
    fn word_counts() {
        assert_eq!(s_objects_upto(&one_obj(), 3).len(), 4);
        let two = FinCategory::discrete([o("a"), o("b")]);
        assert_eq!(s_objects_upto(&two, 2).len(), 7);
    }

    #[test]
    fn hom_counts_over_one_object() {
        let cat = one_obj();
        let w = |n: usize| Word::new(vec![o("x"); n]);
        for (mm, nn) in [(0usize, 0usize), (1, 1), (2, 2), (2, 3), (3, 2)] {
            let planar = s_hom(&cat, Doctrine::Planar, &w(mm), &w(nn)).len();
            let symmetric = s_hom(&cat, Doctrine::Symmetric, &w(mm), &w(nn)).len();
            let cartesian = s_hom(&cat, Doctrine::Cartesian, &w(mm), &w(nn)).len();
            assert_eq!(planar, usize::from(mm == nn));
            let fact = |k: usize| (1..=k).product::<usize>();
            assert_eq!(symmetric, if mm == nn { fact(mm) } else { 0 });
            assert_eq!(cartesian, mm.pow(nn as u32));
        }
    }

    #[test]
    fn arity_maps_validate() {
        let cat = two_chain();
        let ab = Word::new([o("a"), o("b")]);
        let bb = Word::new([o("b"), o("b")]);
        let ok = ArityMap::new(
            Doctrine::Planar,
            ab.clone(),
            bb.clone(),
            vec![0, 1],
            vec![m("f"), m("id_b")],
            &cat,
        );
        assert!(ok.is_ok());
        let wrong_arrow = ArityMap::new(
            Doctrine::Planar,
            ab.clone(),
            bb.clone(),
            vec![0, 1],
            vec![m("id_b"), m("id_b")],
            &cat,
        );
        assert!(matches!(wrong_arrow, Err(ArityError::ArrowEndpoints { .. })));
        let not_planar = ArityMap::new(
            Doctrine::Planar,
            bb.clone(),
            bb.clone(),
            vec![1, 0],
            vec![m("id_b"), m("id_b")],
            &cat,
        );
        assert!(matches!(not_planar, Err(ArityError::NotPlanar)));
        let dup_sym = ArityMap::new(
            Doctrine::Symmetric,
            bb.clone(),
            bb,
            vec![0, 0],
            vec![m("id_b"), m("id_b")],
            &cat,
        );
        assert!(matches!(dup_sym, Err(ArityError::NotBijective)));
    }

    #[test]
    fn composition_identity_and_associativity() {
        let cat = one_obj();
        let w3 = Word::new(vec![o("x"); 3]);
        let maps = s_hom(&cat, Doctrine::Cartesian, &w3, &w3);
        assert_eq!(maps.len(), 27);
        let id = ArityMap::identity(Doctrine::Cartesian, w3.clone(), &cat);
        for f in &maps {
            assert_eq!(&id.compose(f, &cat), f);
            assert_eq!(&f.compose(&id, &cat), f);
            for g in &maps {
                for h in &maps {
                    let left = h.compose(&g.compose(f, &cat), &cat);
                    let right = h.compose(g, &cat).compose(f, &cat);
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn flatten_monad_laws() {
        let a = Word::new([o("a")]);
        let b = Word::new([o("b")]);
        let ab = a.concat(&b);
        assert_eq!(mult_flatten([&ab]), ab);
        assert_eq!(mult_flatten([&a, &b]), ab);
        let (flat, offsets) = flatten_with_offsets(&[ab.clone(), a.clone()]);
        assert_eq!(flat.len(), 3);
        assert_eq!(offsets, vec![0, 2]);
        // Flatten-of-flatten agrees with flattening the flattening.
        let round1 = mult_flatten([&mult_flatten([&a, &b]), &a]);
        let round2 = mult_flatten([&a, &mult_flatten([&b, &a])]);
        assert_eq!(round1, round2);
        assert_eq!(unit_embed(&o("a")), a);
    }

    #[test]
    fn inclusions_preserve_homs() {
        let cat = two_chain();
        let ab = Word::new([o("a"), o("b")]);
        let planar = s_hom(&cat, Doctrine::Planar, &ab, &ab);
        let symmetric = s_hom(&cat, Doctrine::Symmetric, &ab, &ab);
        let cartesian = s_hom(&cat, Doctrine::Cartesian, &ab, &ab);
        for f in &planar {
            assert!(symmetric.contains(&f.promote(Doctrine::Symmetric).unwrap()));
        }
        for f in &symmetric {
            assert!(cartesian.contains(&f.promote(Doctrine::Cartesian).unwrap()));
        }
        assert!(ArityMap::identity(Doctrine::Cartesian, ab, &cat)
            .promote(Doctrine::Planar)
            .is_err());
    }

    #[test]
    fn functor_application_preserves_composition() {
        let c = Arc::new(two_chain());
        let t = Arc::new(FinCategory::discrete([o("x")]));
        let f = Functor::new(
            c.clone(),
            t,
            [(o("a"), o("x")), (o("b"), o("x"))],
            [(m("id_a"), m("id_x")), (m("id_b"), m("id_x")), (m("f"), m("id_x"))],
        )
        .unwrap();
        let ab = Word::new([o("a"), o("b")]);
        let bb = Word::new([o("b"), o("b")]);
        for g in s_hom(&c, Doctrine::Symmetric, &ab, &bb) {
            for h in s_hom(&c, Doctrine::Symmetric, &bb, &bb) {
                let lhs = map_arity(&f, &h.compose(&g, &c));
                let rhs = map_arity(&f, &h).compose(&map_arity(&f, &g), &f.target);
                assert_eq!(lhs, rhs);
            }
        }
        // Collapsing letters grows symmetric hom-sets: recount matches.
        let xx = map_word(&f, &ab);
        assert_eq!(s_hom(&f.target, Doctrine::Symmetric, &xx, &xx).len(), 2);
    }

    #[test]
    fn pure_map_counts() {
        let ab = Word::new([o("a"), o("b")]);
        let ba = Word::new([o("b"), o("a")]);
        let aab = Word::new([o("a"), o("a"), o("b")]);
        assert_eq!(pure_index_maps(Doctrine::Planar, &ab, &ab), vec![vec![0, 1]]);
        assert!(pure_index_maps(Doctrine::Planar, &ab, &ba).is_empty());
        assert_eq!(pure_index_maps(Doctrine::Symmetric, &ab, &ba), vec![vec![1, 0]]);
        // Two `a`-slots for each of the two `a`-positions, one `b`-slot.
        assert_eq!(pure_index_maps(Doctrine::Cartesian, &aab, &aab).len(), 4);
        assert_eq!(pure_index_maps(Doctrine::Symmetric, &aab, &aab).len(), 2);
        // Dropped positions are fine cartesianly, missing letters are not.
        assert_eq!(pure_index_maps(Doctrine::Cartesian, &aab, &ab).len(), 2);
        assert!(pure_index_maps(Doctrine::Cartesian, &ab, &aab).is_empty() == false);
        assert!(pure_index_maps(Doctrine::Cartesian, &Word::singleton(o("b")), &ab).is_empty());
    }

    #[test]
    fn word_category_is_lawful() {
        let base = Arc::new(two_chain());
        for d in Doctrine::ALL {
            let s = SCategory::new(base.clone(), d, 2);
            assert!(s.cat.is_lawful(), "{d}");
            assert_eq!(s.cat.objects().len(), 7);
            let ab = Word::new([o("a"), o("b")]);
            assert_eq!(s.word(s.obj(&ab)), &ab);
            for m in s.cat.morphisms() {
                let am = s.arity(&m.id);
                assert_eq!(s.mor(am), &m.id);
            }
        }
    }

    #[test]
    fn word_level_functor_is_lawful() {
        let c = Arc::new(two_chain());
        let t = Arc::new(FinCategory::discrete([o("x")]));
        let f = Functor::new(
            c.clone(),
            t.clone(),
            [(o("a"), o("x")), (o("b"), o("x"))],
            [(m("id_a"), m("id_x")), (m("id_b"), m("id_x")), (m("f"), m("id_x"))],
        )
        .unwrap();
        for d in Doctrine::ALL {
            let sc = SCategory::new(c.clone(), d, 2);
            let st = SCategory::new(t.clone(), d, 2);
            let sf = s_functor(&f, &sc, &st);
            assert!(sf.is_lawful(), "{d}");
        }
    }

    #[test]
    fn juxtaposition_is_functorial() {
        let cat = one_obj();
        let w1 = Word::new(vec![o("x")]);
        let w2 = Word::new(vec![o("x"); 2]);
        let f = ArityMap::pure(Doctrine::Cartesian, w2.clone(), w1.clone(), vec![1], &cat).unwrap();
        let g = ArityMap::identity(Doctrine::Cartesian, w2.clone(), &cat);
        let fg = f.juxtapose(&g);
        assert_eq!(fg.source.len(), 4);
        assert_eq!(fg.target.len(), 3);
        assert_eq!(fg.index, vec![1, 2, 3]);
        // (f ⊕ g) ∘ (f' ⊕ g') = (f∘f') ⊕ (g∘g')
        let f2 = ArityMap::pure(Doctrine::Cartesian, w2.clone(), w2.clone(), vec![0, 0], &cat).unwrap();
        let g2 = ArityMap::pure(Doctrine::Cartesian, w2.clone(), w2.clone(), vec![1, 0], &cat).unwrap();
        let lhs = f.juxtapose(&g).compose(&f2.juxtapose(&g2), &cat);
        let rhs = f.compose(&f2, &cat).juxtapose(&g.compose(&g2, &cat));
        assert_eq!(lhs, rhs);
    }
}
