//! Representable profunctors of a functor and their adjunction.
//!
//! For `f: A -> B`, [`star`] is the profunctor `A ⇸ B` with elements
//! `hom_B(b, f a)` and [`costar`] the profunctor `B ⇸ A` with elements
//! `hom_B(f a, b)`.  They are adjoint (`star(f) ⊣ costar(f)`) inside the
//! bicategory of profunctors; [`check_adjunction`] builds the unit and
//! counit cells and verifies the two triangle identities elementwise by
//! chaining the canonical unit/associativity bijections of composition with
//! whiskered cells.  [`adjunction_monad`] packages `costar(f) ∘ star(f)`
//! with its induced unit and multiplication.

use super::compose::{
    assoc_cells, compose_prof, left_unit_cells, right_unit_cells, whisker_inner, whisker_outer,
    Composite,
};
use super::{identity_prof, CellViolation, ProfCell, Profunctor};
use crate::fincat::Functor;
use crate::ids::{ElemId, MorId, ObjId};
use std::collections::BTreeMap;
use std::fmt;

/// `star(f)(b, a) = hom_B(b, f a)`, contravariant in `b` by precomposition,
/// covariant in `a` by postcomposition with `f`'s image.
pub fn star(f: &Functor) -> Profunctor {
    let b_cat = f.target.clone();
    let mut cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>> = BTreeMap::new();
    for a in f.source.objects() {
        let fa = f.on_obj(a);
        for m in b_cat.morphisms() {
            if &m.dst == fa {
                cells
                    .entry((m.src.clone(), a.clone()))
                    .or_default()
                    .push(ElemId::new(m.id.as_str()));
            }
        }
    }
    let cat = b_cat.clone();
    let func = f.clone();
    Profunctor::from_actions(
        f.source.clone(),
        b_cat.clone(),
        cells,
        |beta, _a, x| {
            let m = MorId::new(x.as_str());
            ElemId::new(cat.compose(&m, beta).expect("composable by construction").as_str())
        },
        |_b, alpha, x| {
            let m = MorId::new(x.as_str());
            let fa = func.on_mor(alpha);
            ElemId::new(cat.compose(fa, &m).expect("composable by construction").as_str())
        },
    )
    .expect("hom cells and actions are total")
}

/// `costar(f)(a, b) = hom_B(f a, b)`, contravariant in `a`, covariant in `b`.
pub fn costar(f: &Functor) -> Profunctor {
    let b_cat = f.target.clone();
    let mut cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>> = BTreeMap::new();
    for a in f.source.objects() {
        let fa = f.on_obj(a);
        for m in b_cat.morphisms() {
            if &m.src == fa {
                cells
                    .entry((a.clone(), m.dst.clone()))
                    .or_default()
                    .push(ElemId::new(m.id.as_str()));
            }
        }
    }
    let cat = b_cat.clone();
    let func = f.clone();
    Profunctor::from_actions(
        b_cat.clone(),
        f.source.clone(),
        cells,
        |alpha, _b, x| {
            let m = MorId::new(x.as_str());
            let fa = func.on_mor(alpha);
            ElemId::new(cat.compose(&m, fa).expect("composable by construction").as_str())
        },
        |_a, beta, x| {
            let m = MorId::new(x.as_str());
            ElemId::new(cat.compose(beta, &m).expect("composable by construction").as_str())
        },
    )
    .expect("hom cells and actions are total")
}

/// The monad `costar(f) ∘ star(f)` on `A` with its unit and multiplication.
pub struct AdjunctionMonad {
    /// `costar(f) ∘ star(f)` with its coend presentation.
    pub monad: Composite,
    /// `identity_prof(A) ⇒ monad.prof`.
    pub unit: ProfCell,
    /// `(monad.prof ∘ monad.prof) ⇒ monad.prof`, against the composite
    /// produced by `compose_prof(&monad.prof, &monad.prof)`.
    pub mult: ProfCell,
}

pub fn adjunction_monad(f: &Functor) -> AdjunctionMonad {
    let s = star(f);
    let c = costar(f);
    let b_cat = f.target.clone();
    let t = compose_prof(&c, &s).expect("shared middle category");
    let tt = compose_prof(&t.prof, &t.prof).expect("endo boundaries");

    let unit = ProfCell::from_fn(&identity_prof(f.source.clone()), &t.prof, |a2, a1, e| {
        // α: a2 -> a1 becomes the class of (f a2, id_{f a2}, f α).
        let alpha = MorId::new(e.as_str());
        let fa2 = f.on_obj(a2);
        let id_elem = ElemId::new(b_cat.identity(fa2).as_str());
        let falpha = ElemId::new(f.on_mor(&alpha).as_str());
        t.class(a2, a1, fa2, &id_elem, &falpha).clone()
    });

    let mult = ProfCell::from_fn(&tt.prof, &t.prof, |a2, a1, cls| {
        let (mid, yy, xx) = tt.rep(a2, a1, cls);
        let (b1, y1, x1) = t.rep(a2, mid, yy);
        let (_b2, y2, x2) = t.rep(mid, a1, xx);
        // Glue f a2 -y1-> b1 -x1-> f mid -y2-> b2 -x2-> f a1 into one pair.
        let inner = b_cat
            .compose(&MorId::new(y2.as_str()), &MorId::new(x1.as_str()))
            .expect("composable by construction");
        let x = b_cat
            .compose(&MorId::new(x2.as_str()), inner)
            .expect("composable by construction");
        t.class(a2, a1, b1, y1, &ElemId::new(x.as_str())).clone()
    });

    AdjunctionMonad {
        monad: t,
        unit,
        mult,
    }
}

/// The counit `star(f) ∘ costar(f) ⇒ identity_prof(B)`: collapse a class
/// with representative `(a, y: b2 -> f a, x: f a -> b1)` to `x ∘ y`.
pub fn adjunction_counit(f: &Functor, e: &Composite) -> ProfCell {
    let b_cat = f.target.clone();
    ProfCell::from_fn(&e.prof, &identity_prof(b_cat.clone()), |b2, b1, cls| {
        let (_a, y, x) = e.rep(b2, b1, cls);
        let m = b_cat
            .compose(&MorId::new(x.as_str()), &MorId::new(y.as_str()))
            .expect("composable by construction");
        ElemId::new(m.as_str())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AdjunctionViolation {
    UnitCell(CellViolation),
    CounitCell(CellViolation),
    /// First triangle fails: the composite cell on `star(f)` moves an element.
    TriangleStar { b: ObjId, a: ObjId, elem: ElemId },
    /// Second triangle fails on `costar(f)`.
    TriangleCostar { a: ObjId, b: ObjId, elem: ElemId },
}

impl fmt::Display for AdjunctionViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjunctionViolation::UnitCell(v) => write!(out, "unit cell: {v}"),
            AdjunctionViolation::CounitCell(v) => write!(out, "counit cell: {v}"),
            AdjunctionViolation::TriangleStar { b, a, elem } => {
                write!(out, "triangle on star fails at ({b}, {a}) for {elem}")
            }
            AdjunctionViolation::TriangleCostar { a, b, elem } => {
                write!(out, "triangle on costar fails at ({a}, {b}) for {elem}")
            }
        }
    }
}

fn cell_mismatches(actual: &ProfCell, expected: &ProfCell) -> Vec<(ObjId, ObjId, ElemId)> {
    let mut out = Vec::new();
    for ((b, a), elems) in actual.source.cells() {
        for x in elems {
            if actual.apply(b, a, x) != expected.apply(b, a, x) {
                out.push((b.clone(), a.clone(), x.clone()));
            }
        }
    }
    out
}

/// Verify `star(f) ⊣ costar(f)`: unit/counit are lawful cells and both
/// triangle identities hold elementwise.
pub fn check_adjunction(f: &Functor) -> Vec<AdjunctionViolation> {
    let mut report = Vec::new();
    let s = star(f);
    let c = costar(f);
    let i_a = identity_prof(f.source.clone());
    let i_b = identity_prof(f.target.clone());

    let adj = adjunction_monad(f);
    let t = &adj.monad;
    let eta = &adj.unit;
    let e = compose_prof(&s, &c).expect("shared middle category");
    let eps = adjunction_counit(f, &e);

    report.extend(eta.check().into_iter().map(AdjunctionViolation::UnitCell));
    report.extend(eps.check().into_iter().map(AdjunctionViolation::CounitCell));

    // Triangle on star: s ⇒ s∘I_A ⇒ s∘(c∘s) ⇒ (s∘c)∘s ⇒ I_B∘s ⇒ s must be
    // the identity cell.
    {
        let s_ia = compose_prof(&s, &i_a).expect("boundaries");
        let s_t = compose_prof(&s, &t.prof).expect("boundaries");
        let e_s = compose_prof(&e.prof, &s).expect("boundaries");
        let ib_s = compose_prof(&i_b, &s).expect("boundaries");

        let (_, into_unit) = right_unit_cells(&s_ia);
        let w_eta = whisker_inner(&s_ia, &s_t, eta);
        let (_, assoc_left) = assoc_cells(&e, &e_s, t, &s_t);
        let w_eps = whisker_outer(&e_s, &ib_s, &eps);
        let (collapse, _) = left_unit_cells(&ib_s);

        let total = into_unit
            .then(&w_eta)
            .then(&assoc_left)
            .then(&w_eps)
            .then(&collapse);
        for (b, a, elem) in cell_mismatches(&total, &ProfCell::identity(&s)) {
            report.push(AdjunctionViolation::TriangleStar { b, a, elem });
        }
    }

    // Triangle on costar: c ⇒ I_A∘c ⇒ (c∘s)∘c ⇒ c∘(s∘c) ⇒ c∘I_B ⇒ c.
    {
        let ia_c = compose_prof(&i_a, &c).expect("boundaries");
        let t_c = compose_prof(&t.prof, &c).expect("boundaries");
        let c_e = compose_prof(&c, &e.prof).expect("boundaries");
        let c_ib = compose_prof(&c, &i_b).expect("boundaries");

        let (_, into_unit) = left_unit_cells(&ia_c);
        let w_eta = whisker_outer(&ia_c, &t_c, eta);
        let (assoc_right, _) = assoc_cells(t, &t_c, &e, &c_e);
        let w_eps = whisker_inner(&c_e, &c_ib, &eps);
        let (collapse, _) = right_unit_cells(&c_ib);

        let total = into_unit
            .then(&w_eta)
            .then(&assoc_right)
            .then(&w_eps)
            .then(&collapse);
        for (a, b, elem) in cell_mismatches(&total, &ProfCell::identity(&c)) {
            report.push(AdjunctionViolation::TriangleCostar { a, b, elem });
        }
    }

    report
}
