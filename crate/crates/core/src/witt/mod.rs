//! Truncated Witt vectors over finite fields and semilinear algebra on them.

pub mod charpoly;
pub mod matrix;
pub mod polygon;
pub mod ring;
pub mod smith;

pub use matrix::{MatrixJson, SemilinearMap, WittMatrix};
pub use polygon::{
    format_slope, hodge_polygon, serialize_slope, katz_sequence, newton_polygon, parse_slope, word_slope,
    NewtonPolygon, Slope,
};
pub use ring::{p_valuation, witt_ring, WittElement, WittRingParams};
pub use smith::{elementary_divisors, p_times_inverse, smith_form, SmithForm};
