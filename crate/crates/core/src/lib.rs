//! Conic modules over toric algebras.
//!
//! A toric algebra is given by the primitive inward facet normals of a
//! full-dimensional pointed cone. Conic modules are named by ceiling vectors
//! `c_i = ceil(<v, n_i>)`. From these the crate builds chamber cells, the conic
//! chain complexes that resolve the graded simple modules of the endomorphism
//! ring of all conic modules, Ext counts, global dimension, crepant-resolution
//! verdicts and Frobenius summands. All arithmetic is exact.
//!
//! ```
//! use toric_conic::ToricAlgebra;
//!
//! let quadric = ToricAlgebra::from_normals_i64(2, &[vec![1, 1], vec![-1, 1]]).unwrap();
//! assert_eq!(quadric.enumerate_classes().len(), 2);
//! assert_eq!(quadric.global_dimension().unwrap(), 2);
//! ```

pub mod cells;
pub mod chambers;
pub mod complexes;
pub mod cone;
pub mod error;
pub mod frobenius;
pub mod homs;
pub mod io;
pub mod ratgeom;

pub use cells::{Cell, OrientedCell, RestrictionCheck};
pub use chambers::{CeilingVector, Config, ToricAlgebra, TranslationLattice};
pub use complexes::{
    AcyclicityReport, ConicComplex, ModuleComplex, NccrVerdict, ResolutionReport, ScalarComplex, Window,
};
pub use cone::{ConeSpec, ConeValidation, FacetRestriction};
pub use error::{Error, Result};
pub use frobenius::{DModuleReport, RootDecomposition};
pub use homs::MonomialSupport;
pub use io::{analyze, parse_input, render_svg_2d, AnalysisOptions, AnalysisReport, ConeInput, SvgWindow};
