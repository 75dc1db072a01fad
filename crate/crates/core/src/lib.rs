//! Exact computations on minimal Sullivan models over the rationals:
//! graded-commutative algebra, cohomology by exact elimination, the
//! `dim V <= dim H` checker with its sufficient conditions, and the
//! enumeration of admissible degree sequences.

pub mod algebra;
pub mod cli;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod fh_enum;
pub mod hilali;
pub mod io;
pub mod linalg;
pub mod model;

pub use algebra::{FreeAlgebra, Generator, GradedElement, Monomial, Rational};
pub use cohomology::{betti_numbers, betti_table, CohomologyReport, CohomologySlice};
pub use error::{AlgebraError, Result};
pub use hilali::{check_hilali, HilaliVerdict, Status};
pub use model::SullivanModel;
