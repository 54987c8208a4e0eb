//! Exact computations for representations of Dynkin quivers over prime
//! fields: Auslander–Reiten theory of kQ, the algebra B_Q of embeddings
//! between projectives together with its quiver Q̂, the functor M ↦ M̂,
//! point counts of quiver Grassmannians and their desingularizations.

pub mod a2;
pub mod a2_sweep;
pub mod ar;
pub mod desing;
pub mod dot;
pub mod error;
pub mod field;
pub mod grassmannian;
pub mod hq;
pub mod instance;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod projmap;
pub mod quiver;
pub mod rep;
pub mod roots;
pub mod subspace;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use matrix::Matrix;
pub use quiver::{DynkinType, Quiver};
pub use rep::Representation;
pub use ar::{IndecTable, IsoType};
