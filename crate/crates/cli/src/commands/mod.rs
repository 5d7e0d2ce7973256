pub mod annotate;
pub mod census;
pub mod score;
pub mod segment;
pub mod stats;
pub mod validate;
