//! Executable constructive proof that a coloring of the lattice cube
//! `[0, n]^d` in which no `(m+1)`-face sees more than `m + 1` colors uses
//! some color on many vertices.
//!
//! The pipeline: validate a [`Coloring`], start a [`BalanceState`] at level
//! `m`, [`BalanceState::descend_to_ground`], then extract a [`Certificate`]
//! with [`endgame`] and check it with [`verify_certificate`].

pub mod algebra;
pub mod balancing;
pub mod certificate;
pub mod coloring;
pub mod complex;
pub mod error;
pub mod filling;
pub mod format;
pub mod oracle;

pub use algebra::{Cell, CellComplex, Chain, Cochain};
pub use balancing::BalanceState;
pub use certificate::{endgame, lower_bound, verify_certificate, Certificate};
pub use coloring::{split_components, validate, Color, ColorTuple, Coloring, Mode};
pub use complex::{CubeFace, GridSpec, Point, Region, Simplex, SimplicialRegion};
pub use error::{Error, Result};
pub use filling::{fill, FillResult};
