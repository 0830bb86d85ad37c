//! A toolkit for computing in dagger compact closed categories at desk scale.
//!
//! Two backends are provided: finite sets with binary relations ([`rel`]) and
//! finite-dimensional complex Hilbert spaces with dense matrices ([`fhilb`]).
//! Both implement the [`backend::Backend`] interface (composition, dagger,
//! tensor, self-dual cups/caps, biproduct blocks), and the higher layers are
//! generic over it:
//!
//! * [`frobenius`] — dagger Frobenius algebras, normalisers, actions and
//!   involutions, pair-of-pants algebras;
//! * [`cp`] — complete positivity deciders (Choi matrices, relational
//!   conditions), Kraus doubling, unitality, dagger idempotents;
//! * [`split`] — partial equivalence relations as the dagger idempotents of
//!   the relational backend, their splittings and quotient isomorphism tests;
//! * [`biproduct`] — direct sums of objects, morphisms and algebras,
//!   structural morphisms and distributivity;
//! * [`functor`] — the functor `F` from algebras to split idempotents, the
//!   Choi–Effros style functor `G` back, and round-trip witnesses;
//! * [`groupoid`] — finite groupoids, their algebras, enumeration up to
//!   isomorphism, and counterexample searches.
//!
//! The matrix backend is generic over the underlying real scalar via
//! [`scalar::RealScalar`] (any `num_traits` float works); the crate root
//! exports `f64`-based aliases which the command line tool and the JSON layer
//! use.

pub mod backend;
pub mod biproduct;
pub mod cp;
pub mod error;
pub mod fhilb;
pub mod frobenius;
pub mod functor;
pub mod groupoid;
pub mod json;
pub mod rel;
pub mod scalar;
pub mod split;
mod util;

pub use backend::{Backend, Tolerance};
pub use error::Error;

/// Matrix backend over `f64` scalars, the default precision everywhere.
pub type FHilb64 = fhilb::FHilb<f64>;
/// Matrix backend over `f32` scalars (looser tolerances apply).
pub type FHilb32 = fhilb::FHilb<f32>;
/// Dense complex matrix over `f64` scalars.
pub type Mat64 = fhilb::Matrix<f64>;
/// Dense complex matrix over `f32` scalars.
pub type Mat32 = fhilb::Matrix<f32>;
/// Frobenius algebra in the relational backend.
pub type RelAlgebra = frobenius::FrobeniusAlgebra<rel::Rel>;
/// Frobenius algebra in the `f64` matrix backend.
pub type FHilbAlgebra = frobenius::FrobeniusAlgebra<FHilb64>;
