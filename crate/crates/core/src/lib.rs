//! A finite-scale kernel for categories, profunctors, and algebraic theories.
//!
//! Everything here is desk-sized and exact: categories are given by explicit
//! object/morphism/composition tables, profunctors by explicit element sets
//! and action tables, and composite structures (coends, substitution
//! composites, envelopes) are computed by enumerating generators of the
//! defining equivalence relation and closing with union-find.  Canonical
//! representatives make every derived structure deterministic: the same
//! inputs always produce byte-identical output.
//!
//! The module layout follows the mathematics bottom-up:
//!
//! * [`fincat`] — finite categories, functors, natural transformations;
//! * [`profunctor`] — profunctors, coend composition, (co)restriction along
//!   functors, the category-of-elements factorisation, Kleisli objects of
//!   profunctor monads;
//! * [`doctrine`] — the three word doctrines (planar / symmetric /
//!   cartesian), words, arity maps, and the free doctrine category on a base;
//! * [`kleisli`] — graded profunctors `A ⇸ SB`, substitution composition,
//!   graded units, and the word-level extension of an ordinary profunctor;
//! * [`theory`] — multicategory-style theories (operads, props, clones),
//!   theory maps and cells, finite strict algebras, model enumeration,
//!   clones of finite algebras, and the induced monad on a finite set;
//! * [`envelope`] — the free strict algebra (monoidal / prop / Lawvere
//!   envelope) of a theory;
//! * [`compare`] — change of doctrine: pushforward, pullback, and the
//!   adjunction between them.
//!
//! Word length everywhere is truncated at a caller-chosen bound `K`;
//! operations record the bound and are exact on the region where no
//! intermediate arity exceeds it.

pub mod ids;
pub mod util;

pub mod fincat;
pub mod profunctor;

pub mod doctrine;
pub mod kleisli;

pub mod theory;

pub mod envelope;

pub mod compare;

pub mod builtin;

pub mod random;

pub use ids::{ElemId, MorId, ObjId};
