pub mod arith;
pub mod census;
pub mod delone;
pub mod error;
pub mod fixtures;
pub mod form;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod polyhedral;
pub mod secondary;

pub use error::{Error, Result};
pub use arith::{Int, Rational};
pub use census::{CensusState, DomainRecord};
pub use delone::{DeloneCell, DeloneStar, VPolytope};
pub use form::{QuadForm, UnimodularMap};
pub use polyhedral::{HCone, OrbitRegistry, Ray, SymmetryAction};
pub use secondary::{LinearFunctionalOnForms, SecondaryCone};
