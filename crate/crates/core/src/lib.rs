//! Planes of PG(5,q), q even, that meet the Veronese surface, classified
//! into orbits of the group PGL(3,q) acting through the Veronese map.

#![allow(clippy::needless_range_loop, clippy::suspicious_arithmetic_impl, clippy::suspicious_op_assign_impl)]

pub mod cubic;
pub mod error;
pub mod exec;
pub mod extension;
pub mod field;
pub mod geometry;
pub mod lines;
pub mod orbits;
pub mod planes;
pub mod veronese;

pub use error::{ClassifyError, FieldError, GeometryError};
pub use field::{Elem, Field};
