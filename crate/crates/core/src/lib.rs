//! Stem-graph secondary structure prediction.
//!
//! Every candidate stem of a sequence becomes a vertex; two stems are joined
//! by an edge when they can be present in the same structure (disjoint,
//! nested, or pseudoknotted). Each maximal clique of that graph is a
//! candidate folding, and candidates are ranked by their total number of
//! matched base pairs.
//!
//! - [`seq`]: sequences and base-pairing rules
//! - [`stemgraph`]: stem enumeration, co-existence test, graph construction
//! - [`clique`]: maximal clique enumeration and ranking
//! - [`profiles`]: family-specific vertex generation (protein, tRNA, 5S rRNA)
//! - [`eval`]: sensitivity / PPV / MCC / F1 against a reference structure
//! - [`io`]: FASTA, CT, dot-bracket, profile, report and graph-dump formats
//! - [`pipeline`] and [`batch`]: end-to-end drivers
//!
//! ```
//! use stemp::{pipeline, profiles, seq::Sequence};
//!
//! let seq = Sequence::parse("GGCAC AGAAG AUAUG GCUUC GUGCC", "2QUX").unwrap();
//! let cfg = profiles::builtin("protein").unwrap();
//! let outcome = pipeline::predict(&seq, &cfg, &pipeline::PredictOptions::default()).unwrap();
//! assert_eq!(outcome.report.predictions[0].energy, 9);
//! ```

pub mod batch;
pub mod clique;
pub mod error;
pub mod eval;
pub mod exec;
pub mod io;
pub mod pipeline;
pub mod profiles;
pub mod score;
pub mod seq;
pub mod stemgraph;

pub use error::{Error, Result};

/// A base pair as 1-based `(5' index, 3' index)`, first index always smaller.
pub type Pair = (u32, u32);
