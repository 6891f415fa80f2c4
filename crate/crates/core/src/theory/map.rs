//! Maps of theories, 2-cells between them, and model enumeration.
//!
//! A [`TheoryMap`] is a functor on sorts plus a componentwise map of
//! elements commuting with the actions, the unit, and substitution.  A
//! model of `M` in an algebra `X` is a theory map `M → X^*`; enumeration
//! works by seeding the forced unit images, propagating along actions
//! and substitution entries, and backtracking over what remains, with a
//! budget so oversized searches refuse instead of running forever.

use super::{cell_value, endomorphism_theory, FiniteAlgebra, Multicategory};
use crate::doctrine::{map_arity, map_word, ArityMap, Word};
use crate::fincat::{FinCategory, Functor, NatTransformation};
use crate::ids::{ElemId, ObjId};
use crate::util::{Budget, CeilingExceeded};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct TheoryMap {
    pub source: Arc<Multicategory>,
    pub target: Arc<Multicategory>,
    pub sorts: Functor,
    pub components: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>>,
}

impl TheoryMap {
    pub fn component(&self, w: &Word, a: &ObjId, x: &ElemId) -> Option<&ElemId> {
        self.components.get(&(w.clone(), a.clone()))?.get(x)
    }
}

/// Two parallel theory maps with a transformation between their sort
/// functors.
#[derive(Debug, Clone)]
pub struct TheoryCell {
    pub source: TheoryMap,
    pub target: TheoryMap,
    pub nat: NatTransformation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapViolation {
    /// Doctrines or bounds of the two theories differ.
    Frame,
    /// The sort functor has wrong boundaries or breaks functor laws.
    SortFunctor,
    /// No image for an element.
    Missing { word: Word, sort: ObjId, elem: ElemId },
    /// Image lands outside the expected target cell.
    NotInCell { word: Word, sort: ObjId, elem: ElemId },
    /// Components do not commute with a word action.
    WordAction { word: Word, sort: ObjId, elem: ElemId },
    /// Components do not commute with a sort action.
    SortAction { word: Word, sort: ObjId, elem: ElemId },
    /// The unit square fails.
    Unit { word: Word, sort: ObjId, elem: ElemId },
    /// A substitution square fails.
    Subst { word: Word, sort: ObjId, class: ElemId },
    /// The 2-cell's transformation is unlawful or has wrong boundaries.
    CellFrame,
    /// The 2-cell's exchange condition fails at an element.
    Exchange { word: Word, sort: ObjId, elem: ElemId },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MapViolation::*;
        match self {
            Frame => write!(out, "theories have different doctrines or bounds"),
            SortFunctor => write!(out, "sort functor is unlawful or has wrong boundaries"),
            Missing { word, sort, elem } => {
                write!(out, "no image at ({word}, {sort}) for {elem}")
            }
            NotInCell { word, sort, elem } => {
                write!(out, "image at ({word}, {sort}) of {elem} misses its cell")
            }
            WordAction { word, sort, elem } => {
                write!(out, "word action square fails at ({word}, {sort}) on {elem}")
            }
            SortAction { word, sort, elem } => {
                write!(out, "sort action square fails at ({word}, {sort}) on {elem}")
            }
            Unit { word, sort, elem } => {
                write!(out, "unit square fails at ({word}, {sort}) on {elem}")
            }
            Subst { word, sort, class } => {
                write!(out, "substitution square fails at ({word}, {sort}) on {class}")
            }
            CellFrame => write!(out, "2-cell transformation has wrong boundaries"),
            Exchange { word, sort, elem } => {
                write!(out, "2-cell exchange fails at ({word}, {sort}) on {elem}")
            }
        }
    }
}

pub fn check_theory_map(t: &TheoryMap) -> Vec<MapViolation> {
    let mut report = Vec::new();
    let (m, n) = (&*t.source, &*t.target);
    if m.doctrine() != n.doctrine() || m.bound() != n.bound() {
        report.push(MapViolation::Frame);
    }
    if t.sorts.source != *m.sorts() || t.sorts.target != *n.sorts() || !t.sorts.is_lawful() {
        report.push(MapViolation::SortFunctor);
    }
    if !report.is_empty() {
        return report;
    }
    let f = &t.sorts;

    for (w, a, elems) in m.carrier.cells() {
        let iw = map_word(f, w);
        let ia = f.on_obj(a);
        for x in elems {
            match t.component(w, a, x) {
                None => report.push(MapViolation::Missing {
                    word: w.clone(),
                    sort: a.clone(),
                    elem: x.clone(),
                }),
                Some(v) if !n.carrier.elems(&iw, ia).contains(v) => {
                    report.push(MapViolation::NotInCell {
                        word: w.clone(),
                        sort: a.clone(),
                        elem: x.clone(),
                    })
                }
                _ => {}
            }
        }
    }
    if !report.is_empty() {
        return report;
    }

    for (w, a, elems) in m.carrier.cells() {
        let iw = map_word(f, w);
        let ia = f.on_obj(a).clone();
        for x in elems {
            let v = t.component(w, a, x).unwrap();
            for h in m.carrier.words.arities_into(w) {
                let moved = t.component(&h.source, a, m.carrier.left(h, a, x));
                let expect = n.carrier.left(&map_arity(f, h), &ia, v);
                if moved != Some(expect) {
                    report.push(MapViolation::WordAction {
                        word: w.clone(),
                        sort: a.clone(),
                        elem: x.clone(),
                    });
                }
            }
            for alpha in m.sorts().morphisms() {
                if alpha.src != *a {
                    continue;
                }
                let moved = t.component(w, &alpha.dst, m.carrier.right(w, &alpha.id, x));
                let expect = n.carrier.right(&iw, f.on_mor(&alpha.id), v);
                if moved != Some(expect) {
                    report.push(MapViolation::SortAction {
                        word: w.clone(),
                        sort: a.clone(),
                        elem: x.clone(),
                    });
                }
            }
        }
    }

    for (w, a, elems) in m.units().graded.cells() {
        let ia = f.on_obj(a).clone();
        for u in elems {
            let su = m.units().arity(w, a, u);
            let Some(mine) = cell_value(&m.unit, w, a, u) else { continue };
            let theirs = n.unit_elem(&map_arity(f, su), &ia);
            if t.component(w, a, mine) != Some(theirs) {
                report.push(MapViolation::Unit {
                    word: w.clone(),
                    sort: a.clone(),
                    elem: u.clone(),
                });
            }
        }
    }

    for (w, a, table) in m.pairs().cells() {
        let iw = map_word(f, w);
        let ia = f.on_obj(a).clone();
        for (cls, rep) in &table.rep_of {
            let Some(value) = cell_value(&m.subst, w, a, cls) else { continue };
            let image = map_tuple(t, rep, a);
            let Some(target_value) = n.subst_tuple(&iw, &ia, &image) else { continue };
            if t.component(w, a, value) != Some(target_value) {
                report.push(MapViolation::Subst {
                    word: w.clone(),
                    sort: a.clone(),
                    class: cls.clone(),
                });
            }
        }
    }
    report
}

/// Push a substitution tuple through a theory map componentwise.
fn map_tuple(t: &TheoryMap, rep: &crate::kleisli::SubstTuple, a: &ObjId) -> crate::kleisli::SubstTuple {
    let f = &t.sorts;
    crate::kleisli::SubstTuple {
        mid: map_word(f, &rep.mid),
        blocks: rep.blocks.iter().map(|b| map_word(f, b)).collect(),
        x: t.component(&rep.mid, a, &rep.x).expect("totality checked").clone(),
        ys: rep
            .ys
            .iter()
            .enumerate()
            .map(|(i, y)| {
                t.component(&rep.blocks[i], &rep.mid.letters()[i], y)
                    .expect("totality checked")
                    .clone()
            })
            .collect(),
        psi: rep.psi.clone(),
    }
}

pub fn check_theory_cell(c: &TheoryCell) -> Vec<MapViolation> {
    let mut report = check_theory_map(&c.source);
    report.extend(check_theory_map(&c.target));
    if !report.is_empty() {
        return report;
    }
    if c.source.source.carrier != c.target.source.carrier
        || c.source.target.carrier != c.target.target.carrier
        || c.nat.source != c.source.sorts
        || c.nat.target != c.target.sorts
        || !c.nat.is_lawful()
    {
        report.push(MapViolation::CellFrame);
        return report;
    }
    let m = &*c.source.source;
    let n = &*c.source.target;
    let (f1, f2) = (&c.source.sorts, &c.target.sorts);
    for (w, a, elems) in m.carrier.cells() {
        let w1 = map_word(f1, w);
        let w2 = map_word(f2, w);
        let a2 = f2.on_obj(a).clone();
        // Letterwise transformation components as an arity map w1 → w2.
        let phi = ArityMap::new(
            m.doctrine(),
            w1.clone(),
            w2,
            (0..w.len()).collect(),
            w.letters()
                .iter()
                .map(|l| c.nat.components[l].clone())
                .collect(),
            n.sorts(),
        )
        .expect("transformation components align letterwise");
        for x in elems {
            let v1 = c.source.component(w, a, x).unwrap();
            let v2 = c.target.component(w, a, x).unwrap();
            let lhs = n.carrier.right(&w1, &c.nat.components[a], v1);
            let rhs = n.carrier.left(&phi, &a2, v2);
            if lhs != rhs {
                report.push(MapViolation::Exchange {
                    word: w.clone(),
                    sort: a.clone(),
                    elem: x.clone(),
                });
            }
        }
    }
    report
}

pub fn identity_theory_map(m: &Arc<Multicategory>) -> TheoryMap {
    let components = m
        .carrier
        .cells()
        .map(|(w, a, elems)| {
            (
                (w.clone(), a.clone()),
                elems.iter().map(|x| (x.clone(), x.clone())).collect(),
            )
        })
        .collect();
    TheoryMap {
        source: m.clone(),
        target: m.clone(),
        sorts: Functor::identity(m.sorts().clone()),
        components,
    }
}

type Key = (Word, ObjId, ElemId);

struct Search<'s> {
    source: &'s Multicategory,
    target: &'s Multicategory,
    sorts: &'s Functor,
    order: Vec<Key>,
    budget: &'s mut Budget,
}

impl Search<'_> {
    fn image_cell(&self, w: &Word, a: &ObjId) -> (Word, ObjId) {
        (map_word(self.sorts, w), self.sorts.on_obj(a).clone())
    }

    /// Record `key ↦ v`; `false` on conflict or bad membership.
    fn assign(
        &self,
        state: &mut BTreeMap<Key, ElemId>,
        queue: &mut Vec<Key>,
        key: Key,
        v: ElemId,
    ) -> bool {
        let (iw, ia) = self.image_cell(&key.0, &key.1);
        if !self.target.carrier.elems(&iw, &ia).contains(&v) {
            return false;
        }
        match state.get(&key) {
            Some(old) => *old == v,
            None => {
                state.insert(key.clone(), v);
                queue.push(key);
                true
            }
        }
    }

    /// Close `state` under action and substitution consequences.
    fn propagate(&self, state: &mut BTreeMap<Key, ElemId>, queue: &mut Vec<Key>) -> bool {
        loop {
            while let Some((w, a, x)) = queue.pop() {
                let v = state[&(w.clone(), a.clone(), x.clone())].clone();
                let (iw, ia) = self.image_cell(&w, &a);
                let arities: Vec<ArityMap> =
                    self.source.carrier.words.arities_into(&w).cloned().collect();
                for h in arities {
                    let moved = self.source.carrier.left(&h, &a, &x).clone();
                    let forced = self
                        .target
                        .carrier
                        .left(&map_arity(self.sorts, &h), &ia, &v)
                        .clone();
                    if !self.assign(state, queue, (h.source.clone(), a.clone(), moved), forced) {
                        return false;
                    }
                }
                for alpha in self.source.sorts().morphisms() {
                    if alpha.src != a {
                        continue;
                    }
                    let moved = self.source.carrier.right(&w, &alpha.id, &x).clone();
                    let forced = self
                        .target
                        .carrier
                        .right(&iw, self.sorts.on_mor(&alpha.id), &v)
                        .clone();
                    if !self.assign(state, queue, (w.clone(), alpha.dst.clone(), moved), forced) {
                        return false;
                    }
                }
            }
            // Substitution forcing: any class whose inputs are all
            // assigned pins down the image of its value.
            let mut advanced = false;
            for (w, a, table) in self.source.pairs().cells() {
                let (iw, ia) = self.image_cell(w, a);
                for (cls, rep) in &table.rep_of {
                    let Some(value) = cell_value(&self.source.subst, w, a, cls) else {
                        continue;
                    };
                    if state.contains_key(&(w.clone(), a.clone(), value.clone())) {
                        continue;
                    }
                    let Some(x) = state.get(&(rep.mid.clone(), a.clone(), rep.x.clone())) else {
                        continue;
                    };
                    let ys: Option<Vec<ElemId>> = rep
                        .ys
                        .iter()
                        .enumerate()
                        .map(|(i, y)| {
                            state
                                .get(&(
                                    rep.blocks[i].clone(),
                                    rep.mid.letters()[i].clone(),
                                    y.clone(),
                                ))
                                .cloned()
                        })
                        .collect();
                    let Some(ys) = ys else { continue };
                    let image = crate::kleisli::SubstTuple {
                        mid: map_word(self.sorts, &rep.mid),
                        blocks: rep.blocks.iter().map(|b| map_word(self.sorts, b)).collect(),
                        x: x.clone(),
                        ys,
                        psi: rep.psi.clone(),
                    };
                    let Some(forced) = self.target.subst_tuple(&iw, &ia, &image) else {
                        continue;
                    };
                    if !self.assign(
                        state,
                        queue,
                        (w.clone(), a.clone(), value.clone()),
                        forced.clone(),
                    ) {
                        return false;
                    }
                    advanced = true;
                }
            }
            if !advanced && queue.is_empty() {
                return true;
            }
        }
    }

    fn run(
        &mut self,
        state: BTreeMap<Key, ElemId>,
        out: &mut Vec<BTreeMap<Key, ElemId>>,
    ) -> Result<(), CeilingExceeded> {
        let Some(key) = self
            .order
            .iter()
            .find(|key| !state.contains_key(*key))
            .cloned()
        else {
            out.push(state);
            return Ok(());
        };
        let (iw, ia) = self.image_cell(&key.0, &key.1);
        let candidates: Vec<ElemId> = self.target.carrier.elems(&iw, &ia).to_vec();
        for v in candidates {
            self.budget.charge(1)?;
            let mut trial = state.clone();
            let mut queue = Vec::new();
            if self.assign(&mut trial, &mut queue, key.clone(), v)
                && self.propagate(&mut trial, &mut queue)
            {
                self.run(trial, out)?;
            }
        }
        Ok(())
    }
}

/// All theory maps `source → target` over a fixed sort functor, in
/// lexicographic component order.  `pins` forces chosen images up
/// front.  Searches exceeding `ceiling` candidate trials refuse.
pub fn enumerate_theory_maps(
    source: &Arc<Multicategory>,
    target: &Arc<Multicategory>,
    sorts: &Functor,
    pins: &BTreeMap<Key, ElemId>,
    ceiling: u64,
) -> Result<Vec<TheoryMap>, CeilingExceeded> {
    let mut budget = Budget::new("theory map enumeration", ceiling);
    enumerate_with(source, target, sorts, pins, &mut budget)
}

pub(crate) fn enumerate_with(
    source: &Arc<Multicategory>,
    target: &Arc<Multicategory>,
    sorts: &Functor,
    pins: &BTreeMap<Key, ElemId>,
    budget: &mut Budget,
) -> Result<Vec<TheoryMap>, CeilingExceeded> {
    assert_eq!(source.doctrine(), target.doctrine(), "doctrines must match");
    assert_eq!(source.bound(), target.bound(), "bounds must match");
    let order: Vec<Key> = source
        .carrier
        .cells()
        .flat_map(|(w, a, elems)| {
            elems
                .iter()
                .map(|x| (w.clone(), a.clone(), x.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut search = Search {
        source,
        target,
        sorts,
        order,
        budget,
    };

    // Seed: unit images are forced, then apply the pins.
    let mut state = BTreeMap::new();
    let mut queue = Vec::new();
    for (w, a, elems) in source.units().graded.cells() {
        let ia = sorts.on_obj(a).clone();
        for u in elems {
            let su = source.units().arity(w, a, u);
            let mine = cell_value(&source.unit, w, a, u)
                .expect("source unit is total")
                .clone();
            let theirs = target.unit_elem(&map_arity(sorts, su), &ia).clone();
            if !search.assign(&mut state, &mut queue, (w.clone(), a.clone(), mine), theirs) {
                return Ok(Vec::new());
            }
        }
    }
    for (key, v) in pins {
        if !search.assign(&mut state, &mut queue, key.clone(), v.clone()) {
            return Ok(Vec::new());
        }
    }
    if !search.propagate(&mut state, &mut queue) {
        return Ok(Vec::new());
    }

    let mut raw = Vec::new();
    search.run(state, &mut raw)?;

    let mut maps = Vec::new();
    for state in raw {
        let mut components: BTreeMap<(Word, ObjId), BTreeMap<ElemId, ElemId>> = BTreeMap::new();
        for ((w, a, x), v) in state {
            components.entry((w, a)).or_default().insert(x, v);
        }
        let map = TheoryMap {
            source: source.clone(),
            target: target.clone(),
            sorts: sorts.clone(),
            components,
        };
        // Propagation enforces necessary conditions only; keep exactly
        // the assignments that satisfy every square.
        if check_theory_map(&map).is_empty() {
            maps.push(map);
        }
    }
    Ok(maps)
}

/// All functors `a → b`, by backtracking over object and morphism
/// images.
pub fn enumerate_functors(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    ceiling: u64,
) -> Result<Vec<Functor>, CeilingExceeded> {
    let mut budget = Budget::new("functor enumeration", ceiling);
    let mut out = Vec::new();
    let objects = a.objects().to_vec();
    let mut object_map = BTreeMap::new();
    pick_objects(a, b, &objects, &mut object_map, &mut budget, &mut out)?;
    Ok(out)
}

fn pick_objects(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    rest: &[ObjId],
    object_map: &mut BTreeMap<ObjId, ObjId>,
    budget: &mut Budget,
    out: &mut Vec<Functor>,
) -> Result<(), CeilingExceeded> {
    let Some((first, tail)) = rest.split_first() else {
        let mors: Vec<_> = a.morphisms().to_vec();
        let mut morphism_map = BTreeMap::new();
        for o in a.objects() {
            morphism_map.insert(
                a.identity(o).clone(),
                b.identity(&object_map[o]).clone(),
            );
        }
        return pick_morphisms(a, b, &mors, object_map, &mut morphism_map, budget, out);
    };
    for img in b.objects() {
        budget.charge(1)?;
        object_map.insert(first.clone(), img.clone());
        pick_objects(a, b, tail, object_map, budget, out)?;
    }
    object_map.remove(first);
    Ok(())
}

fn pick_morphisms(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    rest: &[crate::fincat::Mor],
    object_map: &BTreeMap<ObjId, ObjId>,
    morphism_map: &mut BTreeMap<crate::ids::MorId, crate::ids::MorId>,
    budget: &mut Budget,
    out: &mut Vec<Functor>,
) -> Result<(), CeilingExceeded> {
    let Some((first, tail)) = rest.split_first() else {
        let functor = Functor::new(
            a.clone(),
            b.clone(),
            object_map.clone(),
            morphism_map.clone(),
        )
        .expect("images were chosen in range");
        if functor.is_lawful() {
            out.push(functor);
        }
        return Ok(());
    };
    if morphism_map.contains_key(&first.id) {
        return pick_morphisms(a, b, tail, object_map, morphism_map, budget, out);
    }
    let candidates: Vec<_> = b
        .hom(&object_map[&first.src], &object_map[&first.dst])
        .into_iter()
        .cloned()
        .collect();
    for img in candidates {
        budget.charge(1)?;
        morphism_map.insert(first.id.clone(), img);
        pick_morphisms(a, b, tail, object_map, morphism_map, budget, out)?;
        morphism_map.remove(&first.id);
    }
    Ok(())
}

/// `assignment` should be a map `m → x^*`; rebuilds the endomorphism
/// theory and reports every broken square.
pub fn check_model(
    m: &Arc<Multicategory>,
    x: &FiniteAlgebra,
    assignment: &TheoryMap,
) -> Vec<MapViolation> {
    let endo = endomorphism_theory(x, m.bound()).expect("endomorphism carrier composes");
    if assignment.source.carrier != m.carrier || assignment.target.carrier != endo.carrier {
        return vec![MapViolation::Frame];
    }
    check_theory_map(assignment)
}

/// All models of `m` in `x`: theory maps into the endomorphism theory,
/// over every functor from the sorts into the algebra's category.
pub fn enumerate_models(
    m: &Arc<Multicategory>,
    x: &FiniteAlgebra,
    ceiling: u64,
) -> Result<Vec<TheoryMap>, CeilingExceeded> {
    assert_eq!(m.doctrine(), x.doctrine, "doctrines must match");
    let endo = Arc::new(endomorphism_theory(x, m.bound()).expect("endomorphism carrier composes"));
    let mut budget = Budget::new("model enumeration", ceiling);
    let mut out = Vec::new();
    for sorts in enumerate_functors(m.sorts(), &x.cat, ceiling)? {
        out.extend(enumerate_with(m, &endo, &sorts, &BTreeMap::new(), &mut budget)?);
    }
    Ok(out)
}
