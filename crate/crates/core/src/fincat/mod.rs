//! Finite categories presented by explicit tables.
//!
//! A [`FinCategory`] stores its objects, morphisms, identity assignment, and
//! full composition table.  Construction ([`FinCategory::new`]) rejects
//! *malformed* data — dangling ids, duplicate ids, identities with the wrong
//! endpoints, composition entries for non-composable pairs.  Whether the
//! tables satisfy the category *laws* is a separate question answered by
//! [`FinCategory::validate`], which returns a list of violations with
//! witnesses instead of an error: a structurally well-formed table that
//! breaks associativity is still a value you can inspect.

mod json;

pub use json::{CategoryDoc, CategoryDocError, FunctorDoc, FunctorDocError, FINCAT_SCHEMA, FUNCTOR_SCHEMA};

use crate::ids::{MorId, ObjId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A morphism record: identifier plus endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mor {
    pub id: MorId,
    pub src: ObjId,
    pub dst: ObjId,
}

/// Structural problems that make a table meaningless (as opposed to lawless).
#[derive(Debug, Clone, thiserror::Error)]
pub enum CategoryDataError {
    #[error("duplicate object id {0}")]
    DuplicateObject(ObjId),
    #[error("duplicate morphism id {0}")]
    DuplicateMorphism(MorId),
    #[error("morphism {mor} references unknown object {obj}")]
    DanglingObject { mor: MorId, obj: ObjId },
    #[error("no identity assigned to object {0}")]
    MissingIdentity(ObjId),
    #[error("identity table entry for unknown object {0}")]
    IdentityForUnknownObject(ObjId),
    #[error("identity of {obj} is unknown morphism {mor}")]
    DanglingIdentity { obj: ObjId, mor: MorId },
    #[error("identity of {obj} is {mor}, whose endpoints are not {obj} -> {obj}")]
    IdentityEndpoints { obj: ObjId, mor: MorId },
    #[error("composition entry references unknown morphism {0}")]
    DanglingComposite(MorId),
    #[error("composition entry ({g}, {f}) keyed by a non-composable pair")]
    NonComposablePair { g: MorId, f: MorId },
    #[error("conflicting composition entries for ({g}, {f})")]
    ConflictingComposite { g: MorId, f: MorId },
}

/// Law violations found by [`FinCategory::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CategoryViolation {
    /// `compose` has no entry for the composable pair `(g, f)`.
    MissingComposite { g: MorId, f: MorId },
    /// `g ∘ f = h` but `h` has the wrong endpoints.
    CompositeEndpoints { g: MorId, f: MorId, got: MorId },
    /// `id_{dst(f)} ∘ f ≠ f`.
    LeftIdentity { f: MorId, got: MorId },
    /// `f ∘ id_{src(f)} ≠ f`.
    RightIdentity { f: MorId, got: MorId },
    /// `(h ∘ g) ∘ f ≠ h ∘ (g ∘ f)`.
    Associativity {
        h: MorId,
        g: MorId,
        f: MorId,
        left: MorId,
        right: MorId,
    },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::MissingComposite { g, f } => {
                write!(out, "missing composite {g} . {f}")
            }
            CategoryViolation::CompositeEndpoints { g, f, got } => {
                write!(out, "composite {g} . {f} = {got} has wrong endpoints")
            }
            CategoryViolation::LeftIdentity { f, got } => {
                write!(out, "left identity law fails at {f}: id . {f} = {got}")
            }
            CategoryViolation::RightIdentity { f, got } => {
                write!(out, "right identity law fails at {f}: {f} . id = {got}")
            }
            CategoryViolation::Associativity {
                h,
                g,
                f,
                left,
                right,
            } => write!(
                out,
                "associativity fails at ({h}, {g}, {f}): ({h}.{g}).{f} = {left} but {h}.({g}.{f}) = {right}"
            ),
        }
    }
}

/// A finite category: objects, morphisms, identities, composition table.
///
/// Objects and morphisms are kept sorted by id, so equal presentations
/// compare equal and all iteration is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<ObjId>,
    morphisms: Vec<Mor>,
    identity: BTreeMap<ObjId, MorId>,
    compose: BTreeMap<(MorId, MorId), MorId>,
    mor_index: BTreeMap<MorId, usize>,
}

impl FinCategory {
    /// Build a category from raw tables, checking structural well-formedness.
    ///
    /// `compose` entries are `((g, f), g∘f)` for `dst(f) = src(g)`.
    pub fn new(
        objects: impl IntoIterator<Item = ObjId>,
        morphisms: impl IntoIterator<Item = Mor>,
        identity: impl IntoIterator<Item = (ObjId, MorId)>,
        compose: impl IntoIterator<Item = ((MorId, MorId), MorId)>,
    ) -> Result<Self, CategoryDataError> {
        let mut objs: Vec<ObjId> = objects.into_iter().collect();
        objs.sort();
        for pair in objs.windows(2) {
            if pair[0] == pair[1] {
                return Err(CategoryDataError::DuplicateObject(pair[0].clone()));
            }
        }
        let obj_set: BTreeSet<&ObjId> = objs.iter().collect();

        let mut mors: Vec<Mor> = morphisms.into_iter().collect();
        mors.sort();
        for pair in mors.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(CategoryDataError::DuplicateMorphism(pair[0].id.clone()));
            }
        }
        let mut mor_index = BTreeMap::new();
        for (i, m) in mors.iter().enumerate() {
            for end in [&m.src, &m.dst] {
                if !obj_set.contains(end) {
                    return Err(CategoryDataError::DanglingObject {
                        mor: m.id.clone(),
                        obj: end.clone(),
                    });
                }
            }
            mor_index.insert(m.id.clone(), i);
        }

        let identity: BTreeMap<ObjId, MorId> = identity.into_iter().collect();
        for (obj, mor) in &identity {
            if !obj_set.contains(obj) {
                return Err(CategoryDataError::IdentityForUnknownObject(obj.clone()));
            }
            let Some(&i) = mor_index.get(mor) else {
                return Err(CategoryDataError::DanglingIdentity {
                    obj: obj.clone(),
                    mor: mor.clone(),
                });
            };
            if mors[i].src != *obj || mors[i].dst != *obj {
                return Err(CategoryDataError::IdentityEndpoints {
                    obj: obj.clone(),
                    mor: mor.clone(),
                });
            }
        }
        for obj in &objs {
            if !identity.contains_key(obj) {
                return Err(CategoryDataError::MissingIdentity(obj.clone()));
            }
        }

        let mut table = BTreeMap::new();
        for ((g, f), gf) in compose {
            for m in [&g, &f, &gf] {
                if !mor_index.contains_key(m) {
                    return Err(CategoryDataError::DanglingComposite(m.clone()));
                }
            }
            let (gm, fm) = (&mors[mor_index[&g]], &mors[mor_index[&f]]);
            if fm.dst != gm.src {
                return Err(CategoryDataError::NonComposablePair { g, f });
            }
            if let Some(prev) = table.insert((g.clone(), f.clone()), gf.clone()) {
                if prev != gf {
                    return Err(CategoryDataError::ConflictingComposite { g, f });
                }
            }
        }

        Ok(FinCategory {
            objects: objs,
            morphisms: mors,
            identity,
            compose: table,
            mor_index,
        })
    }

    /// The empty category.
    pub fn empty() -> Self {
        FinCategory::new([], [], [], []).expect("empty tables are well formed")
    }

    /// Discrete category on the given objects; identity ids are `id_<obj>`.
    pub fn discrete(objects: impl IntoIterator<Item = ObjId>) -> Self {
        let objs: Vec<ObjId> = objects.into_iter().collect();
        let mors: Vec<Mor> = objs
            .iter()
            .map(|o| Mor {
                id: MorId::new(format!("id_{o}")),
                src: o.clone(),
                dst: o.clone(),
            })
            .collect();
        let ids = objs
            .iter()
            .map(|o| (o.clone(), MorId::new(format!("id_{o}"))));
        let comp: Vec<((MorId, MorId), MorId)> = mors
            .iter()
            .map(|m| ((m.id.clone(), m.id.clone()), m.id.clone()))
            .collect();
        FinCategory::new(objs.clone(), mors, ids, comp).expect("discrete tables are well formed")
    }

    pub fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Mor] {
        &self.morphisms
    }

    pub fn has_object(&self, o: &ObjId) -> bool {
        self.objects.binary_search(o).is_ok()
    }

    pub fn mor(&self, id: &MorId) -> Option<&Mor> {
        self.mor_index.get(id).map(|&i| &self.morphisms[i])
    }

    pub fn src(&self, id: &MorId) -> &ObjId {
        &self.morphisms[self.mor_index[id]].src
    }

    pub fn dst(&self, id: &MorId) -> &ObjId {
        &self.morphisms[self.mor_index[id]].dst
    }

    pub fn identity(&self, o: &ObjId) -> &MorId {
        &self.identity[o]
    }

    /// `g ∘ f` where `dst(f) = src(g)`, if tabulated.
    pub fn compose(&self, g: &MorId, f: &MorId) -> Option<&MorId> {
        self.compose.get(&(g.clone(), f.clone()))
    }

    /// Morphisms `src -> dst`, in id order.
    pub fn hom(&self, src: &ObjId, dst: &ObjId) -> Vec<&MorId> {
        self.morphisms
            .iter()
            .filter(|m| m.src == *src && m.dst == *dst)
            .map(|m| &m.id)
            .collect()
    }

    pub fn compose_entries(&self) -> impl Iterator<Item = (&(MorId, MorId), &MorId)> {
        self.compose.iter()
    }

    /// Check the category laws exhaustively; empty report means lawful.
    pub fn validate(&self) -> Vec<CategoryViolation> {
        let mut report = Vec::new();

        // Totality and endpoint agreement of the composition table.
        for g in &self.morphisms {
            for f in &self.morphisms {
                if f.dst != g.src {
                    continue;
                }
                match self.compose(&g.id, &f.id) {
                    None => report.push(CategoryViolation::MissingComposite {
                        g: g.id.clone(),
                        f: f.id.clone(),
                    }),
                    Some(gf) => {
                        let m = &self.morphisms[self.mor_index[gf]];
                        if m.src != f.src || m.dst != g.dst {
                            report.push(CategoryViolation::CompositeEndpoints {
                                g: g.id.clone(),
                                f: f.id.clone(),
                                got: gf.clone(),
                            });
                        }
                    }
                }
            }
        }

        // Identity laws.
        for f in &self.morphisms {
            if let Some(got) = self.compose(self.identity(&f.dst), &f.id) {
                if *got != f.id {
                    report.push(CategoryViolation::LeftIdentity {
                        f: f.id.clone(),
                        got: got.clone(),
                    });
                }
            }
            if let Some(got) = self.compose(&f.id, self.identity(&f.src)) {
                if *got != f.id {
                    report.push(CategoryViolation::RightIdentity {
                        f: f.id.clone(),
                        got: got.clone(),
                    });
                }
            }
        }

        // Associativity over all composable triples, where defined.
        for h in &self.morphisms {
            for g in &self.morphisms {
                if g.dst != h.src {
                    continue;
                }
                let Some(hg) = self.compose(&h.id, &g.id) else {
                    continue;
                };
                for f in &self.morphisms {
                    if f.dst != g.src {
                        continue;
                    }
                    let (Some(gf), Some(left)) =
                        (self.compose(&g.id, &f.id), self.compose(hg, &f.id))
                    else {
                        continue;
                    };
                    let Some(right) = self.compose(&h.id, gf) else {
                        continue;
                    };
                    if left != right {
                        report.push(CategoryViolation::Associativity {
                            h: h.id.clone(),
                            g: g.id.clone(),
                            f: f.id.clone(),
                            left: left.clone(),
                            right: right.clone(),
                        });
                    }
                }
            }
        }

        report
    }

    pub fn is_lawful(&self) -> bool {
        self.validate().is_empty()
    }

    /// The opposite category: same ids, endpoints swapped, table transposed.
    pub fn opposite(&self) -> FinCategory {
        let mors = self.morphisms.iter().map(|m| Mor {
            id: m.id.clone(),
            src: m.dst.clone(),
            dst: m.src.clone(),
        });
        let comp = self
            .compose
            .iter()
            .map(|((g, f), gf)| ((f.clone(), g.clone()), gf.clone()));
        FinCategory::new(
            self.objects.clone(),
            mors,
            self.identity.clone(),
            comp,
        )
        .expect("opposite of well-formed tables is well formed")
    }

    /// Product category; ids are `(a,b)` pairs rendered as strings.
    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let pair_obj = |a: &ObjId, b: &ObjId| ObjId::new(format!("({a},{b})"));
        let pair_mor = |f: &MorId, g: &MorId| MorId::new(format!("({f},{g})"));

        let objects: Vec<ObjId> = self
            .objects
            .iter()
            .flat_map(|a| other.objects.iter().map(move |b| pair_obj(a, b)))
            .collect();
        let morphisms: Vec<Mor> = self
            .morphisms
            .iter()
            .flat_map(|f| {
                other.morphisms.iter().map(move |g| Mor {
                    id: pair_mor(&f.id, &g.id),
                    src: pair_obj(&f.src, &g.src),
                    dst: pair_obj(&f.dst, &g.dst),
                })
            })
            .collect();
        let identity: Vec<(ObjId, MorId)> = self
            .objects
            .iter()
            .flat_map(|a| {
                other.objects.iter().map(move |b| {
                    (
                        pair_obj(a, b),
                        pair_mor(self.identity(a), other.identity(b)),
                    )
                })
            })
            .collect();
        let mut comp = Vec::new();
        for ((g1, f1), h1) in &self.compose {
            for ((g2, f2), h2) in &other.compose {
                comp.push(((pair_mor(g1, g2), pair_mor(f1, f2)), pair_mor(h1, h2)));
            }
        }
        FinCategory::new(objects, morphisms, identity, comp)
            .expect("product of well-formed tables is well formed")
    }
}

/// Problems that make functor data unusable.
#[derive(Debug, Clone, thiserror::Error)]
pub enum FunctorDataError {
    #[error("object map misses object {0}")]
    MissingObject(ObjId),
    #[error("object map sends {obj} to unknown object {image}")]
    DanglingObjectImage { obj: ObjId, image: ObjId },
    #[error("morphism map misses morphism {0}")]
    MissingMorphism(MorId),
    #[error("morphism map sends {mor} to unknown morphism {image}")]
    DanglingMorphismImage { mor: MorId, image: MorId },
}

/// A functor between finite categories, given by total object/morphism maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    object_map: BTreeMap<ObjId, ObjId>,
    morphism_map: BTreeMap<MorId, MorId>,
}

/// Law violations found by [`Functor::check`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FunctorViolation {
    /// Image of `f` does not go `F(src f) -> F(dst f)`.
    Endpoints { f: MorId },
    /// `F(id_a) ≠ id_{F a}`.
    Identity { obj: ObjId },
    /// `F(g ∘ f) ≠ F(g) ∘ F(f)`.
    Composition { g: MorId, f: MorId },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Endpoints { f } => write!(out, "image of {f} has wrong endpoints"),
            FunctorViolation::Identity { obj } => {
                write!(out, "identity of {obj} not preserved")
            }
            FunctorViolation::Composition { g, f } => {
                write!(out, "composite {g} . {f} not preserved")
            }
        }
    }
}

impl Functor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        object_map: impl IntoIterator<Item = (ObjId, ObjId)>,
        morphism_map: impl IntoIterator<Item = (MorId, MorId)>,
    ) -> Result<Self, FunctorDataError> {
        let object_map: BTreeMap<ObjId, ObjId> = object_map.into_iter().collect();
        let morphism_map: BTreeMap<MorId, MorId> = morphism_map.into_iter().collect();
        for o in source.objects() {
            match object_map.get(o) {
                None => return Err(FunctorDataError::MissingObject(o.clone())),
                Some(im) if !target.has_object(im) => {
                    return Err(FunctorDataError::DanglingObjectImage {
                        obj: o.clone(),
                        image: im.clone(),
                    })
                }
                _ => {}
            }
        }
        for m in source.morphisms() {
            match morphism_map.get(&m.id) {
                None => return Err(FunctorDataError::MissingMorphism(m.id.clone())),
                Some(im) if target.mor(im).is_none() => {
                    return Err(FunctorDataError::DanglingMorphismImage {
                        mor: m.id.clone(),
                        image: im.clone(),
                    })
                }
                _ => {}
            }
        }
        Ok(Functor {
            source,
            target,
            object_map,
            morphism_map,
        })
    }

    /// The identity functor.
    pub fn identity(cat: Arc<FinCategory>) -> Self {
        let object_map = cat.objects().iter().map(|o| (o.clone(), o.clone()));
        let morphism_map = cat.morphisms().iter().map(|m| (m.id.clone(), m.id.clone()));
        let (object_map, morphism_map) = (
            object_map.collect::<Vec<_>>(),
            morphism_map.collect::<Vec<_>>(),
        );
        Functor::new(cat.clone(), cat, object_map, morphism_map)
            .expect("identity maps are total and resolve")
    }

    pub fn on_obj(&self, o: &ObjId) -> &ObjId {
        &self.object_map[o]
    }

    pub fn on_mor(&self, m: &MorId) -> &MorId {
        &self.morphism_map[m]
    }

    /// Check functoriality exhaustively.
    pub fn check(&self) -> Vec<FunctorViolation> {
        let mut report = Vec::new();
        for m in self.source.morphisms() {
            let im = self.target.mor(self.on_mor(&m.id)).expect("image resolves");
            if im.src != *self.on_obj(&m.src) || im.dst != *self.on_obj(&m.dst) {
                report.push(FunctorViolation::Endpoints { f: m.id.clone() });
            }
        }
        for o in self.source.objects() {
            if self.on_mor(self.source.identity(o)) != self.target.identity(self.on_obj(o)) {
                report.push(FunctorViolation::Identity { obj: o.clone() });
            }
        }
        for ((g, f), gf) in self.source.compose_entries() {
            let (ig, if_) = (self.on_mor(g), self.on_mor(f));
            if self.target.compose(ig, if_) != Some(self.on_mor(gf)) {
                report.push(FunctorViolation::Composition {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
        }
        report
    }

    pub fn is_lawful(&self) -> bool {
        self.check().is_empty()
    }

    /// `self ∘ earlier` (apply `earlier` first).
    pub fn compose(&self, earlier: &Functor) -> Functor {
        assert_eq!(
            earlier.target, self.source,
            "functor composition boundary mismatch"
        );
        let object_map = earlier
            .object_map
            .iter()
            .map(|(o, im)| (o.clone(), self.on_obj(im).clone()));
        let morphism_map = earlier
            .morphism_map
            .iter()
            .map(|(m, im)| (m.clone(), self.on_mor(im).clone()));
        Functor {
            source: earlier.source.clone(),
            target: self.target.clone(),
            object_map: object_map.collect(),
            morphism_map: morphism_map.collect(),
        }
    }
}

/// A natural transformation candidate between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransformation {
    pub source: Functor,
    pub target: Functor,
    pub components: BTreeMap<ObjId, MorId>,
}

/// Violations found by [`NatTransformation::check`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum NatViolation {
    /// No component at `obj`, or the component does not resolve.
    MissingComponent { obj: ObjId },
    /// Component at `obj` is not a morphism `F(obj) -> G(obj)`.
    ComponentEndpoints { obj: ObjId },
    /// `G(f) ∘ α_src ≠ α_dst ∘ F(f)`.
    Naturality { f: MorId },
}

impl fmt::Display for NatViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatViolation::MissingComponent { obj } => write!(out, "missing component at {obj}"),
            NatViolation::ComponentEndpoints { obj } => {
                write!(out, "component at {obj} has wrong endpoints")
            }
            NatViolation::Naturality { f } => write!(out, "naturality square at {f} fails"),
        }
    }
}

impl NatTransformation {
    /// Check componentwise endpoints and all naturality squares.
    pub fn check(&self) -> Vec<NatViolation> {
        let mut report = Vec::new();
        let cat = &self.source.target;
        for o in self.source.source.objects() {
            match self.components.get(o).and_then(|c| cat.mor(c)) {
                None => {
                    report.push(NatViolation::MissingComponent { obj: o.clone() });
                }
                Some(c) => {
                    if c.src != *self.source.on_obj(o) || c.dst != *self.target.on_obj(o) {
                        report.push(NatViolation::ComponentEndpoints { obj: o.clone() });
                    }
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        for m in self.source.source.morphisms() {
            let (fa, gb) = (self.source.on_mor(&m.id), self.target.on_mor(&m.id));
            let (a_src, a_dst) = (&self.components[&m.src], &self.components[&m.dst]);
            let left = cat.compose(gb, a_src);
            let right = cat.compose(a_dst, fa);
            if left.is_none() || left != right {
                report.push(NatViolation::Naturality { f: m.id.clone() });
            }
        }
        report
    }

    pub fn is_lawful(&self) -> bool {
        self.check().is_empty()
    }
}

#[cfg(test)]
mod tests;
