//! Descriptor-class vocabulary statistics.
//!
//! A compressed vocabulary replaces groups of natural-language words by one
//! descriptor each. Counting how the uses of a descriptor could have been
//! spread over the words it replaces gives a Bose-Einstein style entropy;
//! inverting the Bose-Einstein occupation law assigns each descriptor a price
//! per use ("informatibility"), and classes with a small total price are the
//! first candidates to drop.
//!
//! - [`lexicon`]: frequency dictionaries, descriptor maps, partitions.
//! - [`ingest`]: tokenization, counting, coverage curves, frequency bands.
//! - [`combinatorics`]: exact and logarithmic configuration counts.
//! - [`entropy`]: specific, Shannon and small-occupancy entropies.
//! - [`equilibrium`]: occupation law, fitting, informatibility.
//! - [`compression`]: cost ranking and compression plans.

pub mod combinatorics;
pub mod compression;
pub mod entropy;
pub mod equilibrium;
pub mod error;
pub mod ingest;
pub mod lexicon;
pub mod sum;

pub use error::{Error, Result};
