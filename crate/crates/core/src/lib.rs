//! Linkage of homogeneous ideals: exact algebra, Gröbner bases, resolutions,
//! mapping-cone transforms, Rao classes and minimal elements of even
//! linkage classes.

pub mod algebra;
pub mod cohomology;
pub mod groebner;
pub mod liaison;
pub mod linalg;
pub mod lr;
pub mod modules;
pub mod parse;
pub mod resolutions;
pub mod twist;

pub use algebra::{AlgebraError, Coeff, Field, GradedFreeModule, GradedMatrix, Mono, Poly, Ring};
pub use groebner::{GroebnerError, Ideal};
pub use liaison::{CompleteIntersection, LiaisonError, StableClass};
pub use lr::{LrError, MinimalElement, SharpOrder, SigmaProfile};
pub use modules::GradedModule;
pub use parse::{parse_form, parse_form_list, parse_ideal_file, parse_poly, IdealFile, ParseError};
pub use twist::TwistFunction;
