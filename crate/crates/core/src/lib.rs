//! Finite models of pointed categories (pointed finite sets, finite groups,
//! finite abelian groups) with essential and subobject-essential monos,
//! categories of fractions, and the spectral category built from them.

pub mod backend;
pub mod descriptor;
pub mod elemset;
pub mod error;
pub mod fractions;
pub mod hom;
pub mod limits;
pub mod monoclass;
pub mod morphism;
pub mod object;
pub mod registry;
pub mod spectral;
pub mod subobject;

pub use backend::Backend;
pub use elemset::ElemSet;
pub use error::{CatError, Result};
pub use morphism::{compose, Morphism};
pub use object::{BackendKind, FiniteObject, Obj};
pub use subobject::Subobject;
