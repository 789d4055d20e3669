//! Binary relations on the nonzero nonunit integers and the factorization
//! theory they induce: relation algebra with windowed evaluation, bounded
//! property checking with replayable counterexamples, and enumeration of
//! factorizations whose factors are pairwise related.

pub mod domain;
pub mod factor;
pub mod props;
pub mod relation;
pub mod reldef;
pub mod report;
pub mod search;

pub use domain::{Elem, Window};
pub use relation::Relation;
