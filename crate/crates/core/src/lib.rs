//! Finite elements for elliptic problems with an immersed co-dimension one
//! interface, where the flux jump across the interface enters the weak form
//! as a layer source `∫_Γ f v dΓ` on a background grid that does not see the
//! interface.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: uniform box meshes, an analytic circle/sphere interface with
//! cell-split surface quadrature, continuous `Q^ℓ` spaces, CSR assembly,
//! preconditioned conjugate gradients, and error evaluation in Sobolev norms
//! weighted by a power of the distance to the interface. File formats and the
//! command-line driver live in the `ifem-cli` crate.
//!
//! A full convergence study is one call:
//!
//! ```
//! use ifem_core::study::{run_study, StudyConfig};
//!
//! let mut config = StudyConfig::default_2d();
//! config.min_exp = 2;
//! config.max_exp = 3;
//! config.alphas = vec![0.0, 0.49];
//! let records = run_study(&config).unwrap();
//! assert_eq!(records.len(), 4);
//! assert!(records[3].eoc_l2.is_some());
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod error;
pub mod fe_space;
pub mod interface;
pub mod math;
pub mod mesh;
pub mod norms;
pub mod potential;
pub mod problem;
pub mod quadrature;
pub mod solver;
pub mod sparse;
pub mod study;

pub use error::{Error, Result};

/// A point of `R^dim`, stored with three components. In 2D the third
/// component is always zero.
pub type Point = [f64; 3];
