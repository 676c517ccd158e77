//! Finite-truncation verification workbench for spinor geometry on quantum
//! spaces: exact Gaussian-rational linear algebra, exterior and Clifford
//! algebra, equivariant function models (Peter–Weyl and Cuntz), horizontal
//! calculus with curvature, and spinor bundle operators with spectra.

pub mod scalar;
pub mod linalg;
pub mod exterior;
pub mod clifford;
pub mod group;
pub mod model;
pub mod pw;
pub mod cuntz;
pub mod bundle;
pub mod spinor;
pub mod report;
pub mod verify;
