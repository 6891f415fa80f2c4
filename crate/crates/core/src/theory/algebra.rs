//! Finite strict algebras for the three doctrines and their endomorphism
//! theories.
//!
//! An algebra is a finite category with a strict word evaluation: a
//! monoid on objects plus whatever arrow-level structure the doctrine
//! asks for — a functorial tensor (planar), additionally a symmetry
//! (symmetric), or chosen strict products (cartesian).  Everything is a
//! lookup table, so the laws are checked exhaustively.
//!
//! The endomorphism theory of an algebra `X` has elements
//! `M(𝐛, a) = hom_X(x(𝐛), a)`, with unit the evaluation of arity maps
//! into singletons and substitution inherited from composition in `X`.

use super::{Multicategory, SubstError};
use crate::doctrine::{ArityMap, Doctrine, Word};
use crate::fincat::FinCategory;
use crate::ids::{ElemId, MorId, ObjId};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Doctrine-specific arrow-level structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// A strict (possibly symmetric) monoidal structure: `tensor_mor` is
    /// the tensor on arrows; `swap` holds the components `c: a⊗b → b⊗a`
    /// and must be empty exactly in the planar doctrine.
    Monoidal {
        tensor_mor: BTreeMap<(MorId, MorId), MorId>,
        swap: BTreeMap<(ObjId, ObjId), MorId>,
    },
    /// Chosen strict binary products and terminal object: projections,
    /// a pairing table keyed by pairs of arrows out of a common source,
    /// and the unique arrow to the terminal object per source.
    Cartesian {
        proj1: BTreeMap<(ObjId, ObjId), MorId>,
        proj2: BTreeMap<(ObjId, ObjId), MorId>,
        pair: BTreeMap<(MorId, MorId), MorId>,
        bang: BTreeMap<ObjId, MorId>,
    },
}

/// A finite category with a strict algebra structure for one doctrine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub doctrine: Doctrine,
    pub cat: Arc<FinCategory>,
    /// Value of the empty word.
    pub unit_obj: ObjId,
    /// Object-level monoid: value of two-letter words, folded leftward
    /// for longer ones.
    pub tensor: BTreeMap<(ObjId, ObjId), ObjId>,
    pub structure: Structure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraViolation {
    pub law: &'static str,
    pub at: String,
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} fails at {}", self.law, self.at)
    }
}

fn broken(law: &'static str, at: impl Into<String>) -> AlgebraViolation {
    AlgebraViolation {
        law,
        at: at.into(),
    }
}

impl FiniteAlgebra {
    pub fn tensor_obj(&self, a: &ObjId, b: &ObjId) -> &ObjId {
        &self.tensor[&(a.clone(), b.clone())]
    }

    /// Evaluate a word by left-folding the object monoid.
    pub fn eval_word(&self, w: &Word) -> ObjId {
        let mut letters = w.letters().iter();
        let Some(first) = letters.next() else {
            return self.unit_obj.clone();
        };
        letters.fold(first.clone(), |acc, l| self.tensor_obj(&acc, l).clone())
    }

    /// Tensor of two arrows.  For products this is `⟨f∘π₁, g∘π₂⟩`.
    pub fn tensor_mor(&self, f: &MorId, g: &MorId) -> MorId {
        match &self.structure {
            Structure::Monoidal { tensor_mor, .. } => tensor_mor[&(f.clone(), g.clone())].clone(),
            Structure::Cartesian {
                proj1,
                proj2,
                pair,
                ..
            } => {
                let (a, b) = (self.cat.src(f).clone(), self.cat.src(g).clone());
                let p1 = &proj1[&(a.clone(), b.clone())];
                let p2 = &proj2[&(a, b)];
                let left = self.cat.compose(f, p1).expect("projection composes");
                let right = self.cat.compose(g, p2).expect("projection composes");
                pair[&(left.clone(), right.clone())].clone()
            }
        }
    }

    /// Tensor a row of arrows whose sources spell `src` letterwise; the
    /// empty row gives the identity at the unit object.
    fn tensor_row(&self, arrows: &[MorId]) -> MorId {
        let mut row = arrows.iter();
        let Some(first) = row.next() else {
            return self.cat.identity(&self.unit_obj).clone();
        };
        row.fold(first.clone(), |acc, f| self.tensor_mor(&acc, f))
    }

    /// The symmetry arrow `x(w) → x(w∘p)` realizing a position
    /// permutation `p` (target position `j` reads `w[p[j]]`), built from
    /// adjacent transpositions.
    fn permutation_arrow(&self, w: &Word, p: &[usize]) -> MorId {
        let Structure::Monoidal { swap, .. } = &self.structure else {
            panic!("permutation arrows need a monoidal structure");
        };
        let mut cur: Vec<usize> = (0..w.len()).collect();
        let letter = |i: usize| w.letters()[i].clone();
        let mut arrow = self.cat.identity(&self.eval_word(w)).clone();
        for j in 0..p.len() {
            let mut pos = cur.iter().position(|&i| i == p[j]).expect("p permutes");
            while pos > j {
                // Swap the adjacent pair (pos-1, pos) of the running word.
                let (u, v) = (letter(cur[pos - 1]), letter(cur[pos]));
                let mut step = self.cat.identity(&self.eval_word(&Word::new(
                    cur[..pos - 1].iter().map(|&i| letter(i)),
                )));
                let c = &swap[&(u.clone(), v.clone())];
                let mut acc = if pos == 1 {
                    c.clone()
                } else {
                    self.tensor_mor(step, c)
                };
                for &i in &cur[pos + 1..] {
                    step = self.cat.identity(&letter(i));
                    acc = self.tensor_mor(&acc, step);
                }
                arrow = self
                    .cat
                    .compose(&acc, &arrow)
                    .expect("transposition endpoints line up")
                    .clone();
                cur.swap(pos - 1, pos);
                pos -= 1;
            }
        }
        arrow
    }

    /// Projection `x(w) → w[i]` out of the left-folded product.
    fn projection(&self, w: &Word, i: usize) -> MorId {
        let Structure::Cartesian { proj1, proj2, .. } = &self.structure else {
            panic!("projections need a cartesian structure");
        };
        let letters = w.letters();
        assert!(i < letters.len());
        if letters.len() == 1 {
            return self.cat.identity(&letters[0]).clone();
        }
        // x(w) = x(prefix) × last at every fold step.
        let mut arrow: Option<MorId> = None;
        let mut upper = letters.len();
        loop {
            let prefix = Word::new(letters[..upper - 1].iter().cloned());
            let last = &letters[upper - 1];
            let key = (self.eval_word(&prefix), last.clone());
            if i == upper - 1 {
                let p2 = proj2[&key].clone();
                return match arrow {
                    None => p2,
                    Some(f) => self.cat.compose(&p2, &f).expect("projection chain").clone(),
                };
            }
            let p1 = proj1[&key].clone();
            arrow = Some(match arrow {
                None => p1,
                Some(f) => self.cat.compose(&p1, &f).expect("projection chain").clone(),
            });
            upper -= 1;
            if upper == 1 {
                return match (i, arrow) {
                    (0, Some(f)) => f,
                    _ => unreachable!("index checked above"),
                };
            }
        }
    }

    /// Pair a row of arrows out of `src` into the left-folded product;
    /// the empty row gives the bang arrow.
    fn pair_row(&self, src: &ObjId, arrows: &[MorId]) -> MorId {
        let Structure::Cartesian { pair, bang, .. } = &self.structure else {
            panic!("pairing needs a cartesian structure");
        };
        let mut row = arrows.iter();
        let Some(first) = row.next() else {
            return bang[src].clone();
        };
        row.fold(first.clone(), |acc, f| pair[&(acc, f.clone())].clone())
    }

    /// Evaluate an arity map `h: 𝐛 → 𝐚` to the structural arrow
    /// `x(𝐛) → x(𝐚)`.
    pub fn eval_arity(&self, h: &ArityMap) -> MorId {
        match self.structure {
            Structure::Monoidal { .. } => {
                if self.doctrine == Doctrine::Planar {
                    return self.tensor_row(&h.arrows);
                }
                let shuffle = self.permutation_arrow(&h.source, &h.index);
                let row = self.tensor_row(&h.arrows);
                self.cat
                    .compose(&row, &shuffle)
                    .expect("permutation lands at the arrows' sources")
                    .clone()
            }
            Structure::Cartesian { .. } => {
                let src = self.eval_word(&h.source);
                let legs: Vec<MorId> = h
                    .index
                    .iter()
                    .zip(&h.arrows)
                    .map(|(&i, f)| {
                        let pi = self.projection(&h.source, i);
                        self.cat.compose(f, &pi).expect("leg composes").clone()
                    })
                    .collect();
                self.pair_row(&src, &legs)
            }
        }
    }

    /// Exhaustive structural law check.
    pub fn validate(&self) -> Vec<AlgebraViolation> {
        let mut report = Vec::new();
        let cat = &self.cat;
        let objects = cat.objects();

        // Object monoid: totality, associativity, unit.
        for a in objects {
            for b in objects {
                match self.tensor.get(&(a.clone(), b.clone())) {
                    None => report.push(broken("tensor totality", format!("({a}, {b})"))),
                    Some(ab) if !cat.has_object(ab) => {
                        report.push(broken("tensor totality", format!("({a}, {b})")))
                    }
                    _ => {}
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        for a in objects {
            if self.tensor_obj(&self.unit_obj, a) != a || self.tensor_obj(a, &self.unit_obj) != a {
                report.push(broken("tensor unit", format!("{a}")));
            }
            for b in objects {
                for c in objects {
                    let left = self.tensor_obj(self.tensor_obj(a, b), c);
                    let right = self.tensor_obj(a, self.tensor_obj(b, c));
                    if left != right {
                        report.push(broken("tensor associativity", format!("({a}, {b}, {c})")));
                    }
                }
            }
        }
        if !report.is_empty() {
            return report;
        }

        match &self.structure {
            Structure::Monoidal { tensor_mor, swap } => {
                self.validate_monoidal(tensor_mor, swap, &mut report)
            }
            Structure::Cartesian {
                proj1,
                proj2,
                pair,
                bang,
            } => self.validate_cartesian(proj1, proj2, pair, bang, &mut report),
        }
        report
    }

    fn validate_monoidal(
        &self,
        tensor_mor: &BTreeMap<(MorId, MorId), MorId>,
        swap: &BTreeMap<(ObjId, ObjId), MorId>,
        report: &mut Vec<AlgebraViolation>,
    ) {
        let cat = &self.cat;
        if self.doctrine == Doctrine::Cartesian {
            report.push(broken("doctrine structure", "monoidal data under cartesian"));
            return;
        }
        if self.doctrine == Doctrine::Planar && !swap.is_empty() {
            report.push(broken("doctrine structure", "swap data under planar"));
            return;
        }
        let mors = cat.morphisms();
        for f in mors {
            for g in mors {
                let Some(fg) = tensor_mor.get(&(f.id.clone(), g.id.clone())) else {
                    report.push(broken("arrow tensor totality", format!("({}, {})", f.id, g.id)));
                    continue;
                };
                let Some(m) = cat.mor(fg) else {
                    report.push(broken("arrow tensor totality", format!("({}, {})", f.id, g.id)));
                    continue;
                };
                if m.src != *self.tensor_obj(&f.src, &g.src)
                    || m.dst != *self.tensor_obj(&f.dst, &g.dst)
                {
                    report.push(broken("arrow tensor endpoints", format!("({}, {})", f.id, g.id)));
                }
            }
        }
        if !report.is_empty() {
            return;
        }
        for a in cat.objects() {
            for b in cat.objects() {
                let ids = tensor_mor[&(cat.identity(a).clone(), cat.identity(b).clone())].clone();
                if ids != *cat.identity(self.tensor_obj(a, b)) {
                    report.push(broken("arrow tensor identities", format!("({a}, {b})")));
                }
            }
        }
        for f in mors {
            for g in mors {
                for f2 in mors {
                    if f2.src != f.dst {
                        continue;
                    }
                    for g2 in mors {
                        if g2.src != g.dst {
                            continue;
                        }
                        let comp_first = tensor_mor[&(
                            cat.compose(&f2.id, &f.id).unwrap().clone(),
                            cat.compose(&g2.id, &g.id).unwrap().clone(),
                        )]
                            .clone();
                        let tensor_first = cat
                            .compose(
                                &tensor_mor[&(f2.id.clone(), g2.id.clone())],
                                &tensor_mor[&(f.id.clone(), g.id.clone())],
                            )
                            .cloned();
                        if tensor_first.as_ref() != Some(&comp_first) {
                            report.push(broken(
                                "arrow tensor interchange",
                                format!("({}, {}, {}, {})", f.id, g.id, f2.id, g2.id),
                            ));
                        }
                    }
                }
            }
        }
        for f in mors {
            for g in mors {
                for h in mors {
                    let left = tensor_mor[&(
                        tensor_mor[&(f.id.clone(), g.id.clone())].clone(),
                        h.id.clone(),
                    )]
                        .clone();
                    let right = tensor_mor[&(
                        f.id.clone(),
                        tensor_mor[&(g.id.clone(), h.id.clone())].clone(),
                    )]
                        .clone();
                    if left != right {
                        report.push(broken(
                            "arrow tensor associativity",
                            format!("({}, {}, {})", f.id, g.id, h.id),
                        ));
                    }
                }
            }
        }
        for f in mors {
            let unit_id = cat.identity(&self.unit_obj).clone();
            if tensor_mor[&(unit_id.clone(), f.id.clone())] != f.id
                || tensor_mor[&(f.id.clone(), unit_id)] != f.id
            {
                report.push(broken("arrow tensor unit", format!("{}", f.id)));
            }
        }

        if self.doctrine != Doctrine::Symmetric {
            return;
        }
        for a in cat.objects() {
            for b in cat.objects() {
                let Some(c) = swap.get(&(a.clone(), b.clone())).and_then(|c| cat.mor(c)) else {
                    report.push(broken("symmetry totality", format!("({a}, {b})")));
                    continue;
                };
                if c.src != *self.tensor_obj(a, b) || c.dst != *self.tensor_obj(b, a) {
                    report.push(broken("symmetry endpoints", format!("({a}, {b})")));
                }
            }
        }
        if !report.is_empty() {
            return;
        }
        for a in cat.objects() {
            for b in cat.objects() {
                let there = &swap[&(a.clone(), b.clone())];
                let back = &swap[&(b.clone(), a.clone())];
                if cat.compose(back, there) != Some(cat.identity(self.tensor_obj(a, b))) {
                    report.push(broken("symmetry involution", format!("({a}, {b})")));
                }
                for c in cat.objects() {
                    // c_{a⊗b,c} = (c_{a,c} ⊗ id_b) ∘ (id_a ⊗ c_{b,c})
                    let big = &swap[&(self.tensor_obj(a, b).clone(), c.clone())];
                    let inner = self.tensor_mor(cat.identity(a), &swap[&(b.clone(), c.clone())]);
                    let outer = self.tensor_mor(&swap[&(a.clone(), c.clone())], cat.identity(b));
                    if cat.compose(&outer, &inner).cloned().as_ref() != Some(big) {
                        report.push(broken("symmetry hexagon", format!("({a}, {b}, {c})")));
                    }
                }
            }
        }
        for f in cat.morphisms() {
            for g in cat.morphisms() {
                let before = &swap[&(f.src.clone(), g.src.clone())];
                let after = &swap[&(f.dst.clone(), g.dst.clone())];
                let left = cat.compose(after, &self.tensor_mor(&f.id, &g.id));
                let right = cat.compose(&self.tensor_mor(&g.id, &f.id), before);
                if left.is_none() || left != right {
                    report.push(broken("symmetry naturality", format!("({}, {})", f.id, g.id)));
                }
            }
        }
    }

    fn validate_cartesian(
        &self,
        proj1: &BTreeMap<(ObjId, ObjId), MorId>,
        proj2: &BTreeMap<(ObjId, ObjId), MorId>,
        pair: &BTreeMap<(MorId, MorId), MorId>,
        bang: &BTreeMap<ObjId, MorId>,
        report: &mut Vec<AlgebraViolation>,
    ) {
        let cat = &self.cat;
        if self.doctrine != Doctrine::Cartesian {
            report.push(broken("doctrine structure", "product data without cartesian"));
            return;
        }
        for a in cat.objects() {
            let Some(b) = bang.get(a).and_then(|m| cat.mor(m)) else {
                report.push(broken("terminal totality", format!("{a}")));
                continue;
            };
            if b.src != *a || b.dst != self.unit_obj {
                report.push(broken("terminal endpoints", format!("{a}")));
            }
        }
        for a in cat.objects() {
            for f in cat.hom(a, &self.unit_obj) {
                if bang.get(a) != Some(f) {
                    report.push(broken("terminal uniqueness", format!("{f}")));
                }
            }
        }
        for a in cat.objects() {
            for b in cat.objects() {
                let ab = self.tensor_obj(a, b).clone();
                let key = (a.clone(), b.clone());
                let ok1 = proj1
                    .get(&key)
                    .and_then(|m| cat.mor(m))
                    .is_some_and(|m| m.src == ab && m.dst == *a);
                let ok2 = proj2
                    .get(&key)
                    .and_then(|m| cat.mor(m))
                    .is_some_and(|m| m.src == ab && m.dst == *b);
                if !ok1 || !ok2 {
                    report.push(broken("projection endpoints", format!("({a}, {b})")));
                }
            }
        }
        if !report.is_empty() {
            return;
        }
        for f in cat.morphisms() {
            for g in cat.morphisms() {
                if f.src != g.src {
                    continue;
                }
                let key = (f.id.clone(), g.id.clone());
                let Some(p) = pair.get(&key).and_then(|m| cat.mor(m)) else {
                    report.push(broken("pairing totality", format!("({}, {})", f.id, g.id)));
                    continue;
                };
                let prod = self.tensor_obj(&f.dst, &g.dst).clone();
                if p.src != f.src || p.dst != prod {
                    report.push(broken("pairing endpoints", format!("({}, {})", f.id, g.id)));
                    continue;
                }
                let p1 = &proj1[&(f.dst.clone(), g.dst.clone())];
                let p2 = &proj2[&(f.dst.clone(), g.dst.clone())];
                if cat.compose(p1, &p.id.clone()).cloned() != Some(f.id.clone())
                    || cat.compose(p2, &p.id.clone()).cloned() != Some(g.id.clone())
                {
                    report.push(broken("pairing projections", format!("({}, {})", f.id, g.id)));
                }
                for h in cat.morphisms() {
                    if h.dst != f.src {
                        continue;
                    }
                    let direct = pair[&(
                        cat.compose(&f.id, &h.id).unwrap().clone(),
                        cat.compose(&g.id, &h.id).unwrap().clone(),
                    )]
                        .clone();
                    if cat.compose(&p.id.clone(), &h.id).cloned() != Some(direct) {
                        report.push(broken(
                            "pairing precomposition",
                            format!("({}, {}, {})", f.id, g.id, h.id),
                        ));
                    }
                }
            }
        }
        for a in cat.objects() {
            for b in cat.objects() {
                let key = (a.clone(), b.clone());
                let tupled = pair[&(proj1[&key].clone(), proj2[&key].clone())].clone();
                if tupled != *cat.identity(self.tensor_obj(a, b)) {
                    report.push(broken("pairing surjective", format!("({a}, {b})")));
                }
            }
        }
    }
}

/// The endomorphism theory `x^*`: elements at `(𝐛, a)` are the arrows
/// `x(𝐛) → a`, the unit evaluates arity maps into singletons, and
/// substitution composes in the algebra's category.  Always normal.
pub fn endomorphism_theory(x: &FiniteAlgebra, k: usize) -> Result<Multicategory, SubstError> {
    let d = x.doctrine;
    let cat = x.cat.clone();
    let words = crate::doctrine::s_objects_upto(&cat, k);
    let mut cells: BTreeMap<(Word, ObjId), Vec<ElemId>> = BTreeMap::new();
    for w in &words {
        let value = x.eval_word(w);
        for a in cat.objects() {
            let elems: Vec<ElemId> = cat
                .hom(&value, a)
                .into_iter()
                .map(|m| ElemId::new(m.as_str()))
                .collect();
            if !elems.is_empty() {
                cells.insert((w.clone(), a.clone()), elems);
            }
        }
    }
    let carrier = crate::kleisli::GradedProfunctor::from_actions(
        d,
        cat.clone(),
        cat.clone(),
        k,
        cells,
        |h, _a, f| {
            let structural = x.eval_arity(h);
            let m = MorId::new(f.as_str());
            ElemId::new(cat.compose(&m, &structural).expect("action composes").as_str())
        },
        |_w, alpha, f| {
            let m = MorId::new(f.as_str());
            ElemId::new(cat.compose(alpha, &m).expect("action composes").as_str())
        },
    )
    .expect("endomorphism tables are well formed");

    Multicategory::from_tables(
        carrier,
        |_w, _a, u| ElemId::new(x.eval_arity(u).as_str()),
        |w, _a, t| {
            let row: Vec<MorId> = t.ys.iter().map(|y| MorId::new(y.as_str())).collect();
            let glue = match x.structure {
                Structure::Monoidal { .. } => x.tensor_row(&row),
                Structure::Cartesian { .. } => {
                    let src = x.eval_word(&flat_of(&t.blocks));
                    let legs: Vec<MorId> = row
                        .iter()
                        .enumerate()
                        .map(|(i, f)| {
                            let flat = flat_of(&t.blocks);
                            let offset: usize = t.blocks[..i].iter().map(Word::len).sum();
                            let picks: Vec<usize> =
                                (offset..offset + t.blocks[i].len()).collect();
                            let reind = ArityMap::pure(
                                x.doctrine,
                                flat,
                                t.blocks[i].clone(),
                                picks,
                                &cat,
                            )
                            .expect("block inclusion is pure");
                            cat.compose(f, &x.eval_arity(&reind))
                                .expect("leg composes")
                                .clone()
                        })
                        .collect();
                    x.pair_row(&src, &legs)
                }
            };
            let psi = ArityMap::pure(
                x.doctrine,
                w.clone(),
                flat_of(&t.blocks),
                t.psi.clone(),
                &cat,
            )
            .expect("stored matching is pure");
            let f = MorId::new(t.x.as_str());
            let inner = cat
                .compose(&glue, &x.eval_arity(&psi))
                .expect("matching evaluates");
            Some(ElemId::new(
                cat.compose(&f, &inner).expect("substitution composes").as_str(),
            ))
        },
        true,
    )
}

fn flat_of(blocks: &[Word]) -> Word {
    crate::doctrine::mult_flatten(blocks.iter())
}
