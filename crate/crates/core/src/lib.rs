//! Exact computation of Heegaard Floer correction terms for lens spaces and
//! knot surgeries, and a spin^c-matching obstruction engine for deciding
//! which surgery slopes on which knots can produce a given Seifert fibred
//! space. All arithmetic is exact rational; nothing is ever rounded.
//!
//! The crate is organized around the pipeline:
//!
//! * [`numeric`] — exact rationals, residues, signs;
//! * [`lens`] — the lens-space recursion with memoized and on-disk caching;
//! * [`alexander`] — symmetric Alexander polynomials, torsion coefficients,
//!   and V-sequences;
//! * [`surgery`] — the surgery formula `d = d_lens - 2 V_kappa`;
//! * [`matching`] — affine spin^c identifications, delta profiles, and the
//!   V-sequence solver;
//! * [`bounds`] — effective finiteness certificates and the step-difference
//!   decomposition `A k + B + C_k`;
//! * [`nil`] — the driver enumerating Nil Seifert fibred targets on the
//!   trefoil and the cable slope solver.

pub mod alexander;
pub mod bounds;
pub mod error;
pub mod lens;
pub mod matching;
pub mod nil;
pub mod numeric;
pub mod surgery;

pub use error::{Error, VSeqViolation};
pub use numeric::{Rational, Sign};
