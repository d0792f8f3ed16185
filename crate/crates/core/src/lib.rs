//! Numerical toolkit for the growth of genus-zero entire functions.

pub mod error;
pub mod families;
pub mod genus_zero;
pub mod tail;

pub use error::{CoreError, Result};
pub use families::{FamilyKind, FunctionSequence, ProfileRow, ProfileTable, SurrogateStat};
pub use genus_zero::{
    order_estimate, GenusZeroFunction, JensenQuadrature, LogAbs, QuadratureOptions,
    SupNormOptions, SupNormResult, Zero,
};
pub use tail::{TailKind, TailModel};
