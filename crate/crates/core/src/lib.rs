//! Finite-scale verification core for fixed-point rigidity arguments on
//! Bruhat–Tits buildings.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`scalars`]: prime-power finite fields and quaternions.
//! - [`linalg`]: small dense matrices over R, C and H, and a cyclic Jacobi
//!   eigensolver for real symmetric matrices.
//! - [`geometry`]: projective planes, symplectic quadrangles and the vertex
//!   link graphs built from them.
//! - [`spectra`]: oriented incidence matrices, their Gram matrices and the
//!   spectral gaps of link graphs.
//! - [`cat0`]: finite-rank nonpositively curved model spaces (Euclidean,
//!   hyperbolic, SPD and products) with exp/log maps, Fréchet means and
//!   isometries.
//! - [`harmonic`]: voltage 2-complexes, the equivariant energy, harmonic
//!   descent and the rigidity chain report.
//! - [`indefinite`]: parabolic block matrices preserving an indefinite
//!   sesquilinear form over R, C or H.
//! - [`apartment`]: barycentric simplices of the spherical apartment and
//!   their diameters.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod apartment;
pub mod cat0;
pub mod geometry;
pub mod harmonic;
pub mod indefinite;
pub mod linalg;
pub(crate) mod math;
pub mod scalars;
pub mod spectra;

pub use cat0::{Cat0Error, Isometry, ModelSpace, Point, Tangent};
pub use geometry::{GeometryError, IncidenceGeometry, LinkGraph, LinkKind};
pub use harmonic::{EquivariantMap, HarmonicError, VoltageComplex};
pub use linalg::Mat;
pub use scalars::{FiniteField, Quaternion, ScalarError};
pub use spectra::{SpectralError, SpectralReport};
