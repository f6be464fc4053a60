//! Curve shortening flow with a radial density in the plane.
//!
//! Closed curves move with normal velocity `k_psi = k - <grad psi, N>`, the
//! gradient flow of the weighted length `int e^psi ds`. The crate evolves
//! polygonal curves under this flow, classifies the psi-minimal circles of a
//! radial density, and predicts collapse times and limit circles for the
//! density families where they are known exactly.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod circle_ode;
pub mod curve;
pub mod density;
pub mod error;
pub mod flow;
pub mod geom;
pub mod io;
pub mod verify;

pub use curve::{CurveGeometry, DiscreteCurve};
pub use density::{classify_circle, find_crossings, stability_second_variation, CrossingSet, RadialDensity};
pub use error::{Error, Result};
pub use geom::Vec2;
