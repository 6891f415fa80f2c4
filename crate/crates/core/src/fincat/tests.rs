use super::*;
use crate::ids::{MorId, ObjId};

fn o(s: &str) -> ObjId {
    ObjId::new(s)
}
fn m(s: &str) -> MorId {
    MorId::new(s)
}

/// Free category on a -> b: three morphisms total.
pub(crate) fn two_chain() -> FinCategory {
    FinCategory::new(
        [o("a"), o("b")],
        [
            Mor {
                id: m("id_a"),
                src: o("a"),
                dst: o("a"),
            },
            Mor {
                id: m("id_b"),
                src: o("b"),
                dst: o("b"),
            },
            Mor {
                id: m("f"),
                src: o("a"),
                dst: o("b"),
            },
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
fn two_chain_is_lawful() {
    assert!(two_chain().validate().is_empty());
}

#[test]
fn dangling_compose_id_is_data_error_not_violation() {
    let err = FinCategory::new(
        [o("a")],
        [Mor {
            id: m("id_a"),
            src: o("a"),
            dst: o("a"),
        }],
        [(o("a"), m("id_a"))],
        [((m("id_a"), m("ghost")), m("id_a"))],
    )
    .unwrap_err();
    assert!(matches!(err, CategoryDataError::DanglingComposite(_)));
}

#[test]
fn missing_composite_is_a_violation() {
    let cat = FinCategory::new(
        [o("a"), o("b")],
        [
            Mor {
                id: m("id_a"),
                src: o("a"),
                dst: o("a"),
            },
            Mor {
                id: m("id_b"),
                src: o("b"),
                dst: o("b"),
            },
            Mor {
                id: m("f"),
                src: o("a"),
                dst: o("b"),
            },
        ],
        [(o("a"), m("id_a")), (o("b"), m("id_b"))],
        [
            ((m("id_a"), m("id_a")), m("id_a")),
            ((m("id_b"), m("id_b")), m("id_b")),
            ((m("f"), m("id_a")), m("f")),
            // (id_b, f) missing on purpose
        ],
    )
    .unwrap();
    let report = cat.validate();
    assert!(report
        .iter()
        .any(|v| matches!(v, CategoryViolation::MissingComposite { .. })));
}

#[test]
fn broken_identity_law_detected() {
    // Two parallel endomaps where the designated identity composes wrongly.
    let cat = FinCategory::new(
        [o("a")],
        [
            Mor {
                id: m("e"),
                src: o("a"),
                dst: o("a"),
            },
            Mor {
                id: m("u"),
                src: o("a"),
                dst: o("a"),
            },
        ],
        [(o("a"), m("u"))],
        [
            ((m("u"), m("u")), m("u")),
            ((m("u"), m("e")), m("u")), // violates left identity: u∘e should be e
            ((m("e"), m("u")), m("e")),
            ((m("e"), m("e")), m("e")),
        ],
    )
    .unwrap();
    let report = cat.validate();
    assert!(report
        .iter()
        .any(|v| matches!(v, CategoryViolation::LeftIdentity { .. })));
}

#[test]
fn opposite_is_involutive_and_lawful() {
    let c = two_chain();
    let op = c.opposite();
    assert!(op.validate().is_empty());
    assert_eq!(op.src(&m("f")), &o("b"));
    assert_eq!(op.opposite(), c);
}

#[test]
fn product_of_two_chain_with_itself_has_nine_morphisms() {
    let c = two_chain();
    let p = c.product(&c);
    assert_eq!(p.objects().len(), 4);
    assert_eq!(p.morphisms().len(), 9);
    assert!(p.validate().is_empty());
}

#[test]
fn product_with_terminal_preserves_counts() {
    let c = two_chain();
    let point = FinCategory::discrete([o("*")]);
    let p = c.product(&point);
    assert_eq!(p.objects().len(), c.objects().len());
    assert_eq!(p.morphisms().len(), c.morphisms().len());
    assert!(p.validate().is_empty());
}

#[test]
fn identity_functor_checks() {
    let c = Arc::new(two_chain());
    assert!(Functor::identity(c).check().is_empty());
}

#[test]
fn non_functor_flagged() {
    // Send f to id_a: endpoints break.
    let c = Arc::new(two_chain());
    let f = Functor::new(
        c.clone(),
        c.clone(),
        [(o("a"), o("a")), (o("b"), o("b"))],
        [
            (m("id_a"), m("id_a")),
            (m("id_b"), m("id_b")),
            (m("f"), m("id_a")),
        ],
    )
    .unwrap();
    assert!(f
        .check()
        .iter()
        .any(|v| matches!(v, FunctorViolation::Endpoints { .. })));
}

#[test]
fn json_round_trip_is_canonical() {
    let c = two_chain().product(&two_chain());
    let doc = CategoryDoc::from_category(&c);
    let text = serde_json::to_string_pretty(&doc).unwrap();
    let doc2: CategoryDoc = serde_json::from_str(&text).unwrap();
    let c2 = doc2.into_category().unwrap();
    assert_eq!(c, c2);
    let text2 = serde_json::to_string_pretty(&CategoryDoc::from_category(&c2)).unwrap();
    assert_eq!(text, text2);
}
