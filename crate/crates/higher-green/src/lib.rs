//! Dual-engine toolkit for higher Green functions at CM points.
//!
//! One engine is exact: big rationals, quadratic and biquadratic number
//! fields, weighted polynomials in the Weierstrass coefficients a, b, and
//! truncated Laurent series, feeding hypercover residue calculus and
//! intersection numbers on E x E. The other engine is numeric: arbitrary
//! precision complex arithmetic for Eisenstein series, the weight-4 form
//! attached to the point i, Green function Poincare series and Eichler
//! path integration.
//!
//! The headline computation equates, three independent ways, the value
//! G_2(tau_7, i) with (8/sqrt 7) log(8 - 3 sqrt 7).

// negated comparisons on MPFR floats are deliberate: they fail closed when
// a value is NaN, where the suggested rewrite would silently pass
#![allow(clippy::neg_cmp_op_on_partial_ord)]

// exact substrate
pub mod bifield;
pub mod laurent;
pub mod qmpoly;
pub mod quad;
pub mod ring;
pub mod wpoly;

// the family of curves and its residue calculus
pub mod branch;
pub mod dmodule;
pub mod hyperform;
pub mod weierstrass;

// cycles and group cohomology
pub mod cohomology;
pub mod cycles;

// numeric engine
pub mod eichler;
pub mod green;
pub mod hp;
pub mod modular;
pub mod special;

// command surface
pub mod record;
pub mod verify;

pub use bifield::{field_norm, BiField, TowerElem};
pub use green::CMPoint;
pub use hp::HPComplex;
pub use laurent::{Cut, Laurent, LaurentError};
pub use ring::{GaussRat, Ring, SqrtRing};
pub use wpoly::{MonoFrac, WPoly};
