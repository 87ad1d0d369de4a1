//! Bipartite graphicality of degree-sequence pairs and of whole parameter
//! classes P(a,b,c,d,m,n,S).
//!
//! - [`seqcore`]: sequences, block form, class parameters, min-cap sums.
//! - [`galeryser`]: pair tests (full, block-boundary) and realization.
//! - [`criterion`]: closed-form class criterion and its reduction machinery.
//! - [`enumeration`]: exhaustive class generation and the brute-force oracle.
//! - [`cli`]: the `bgseq` command-line surface and sweep encodings.
//!
//! With the default `parallel` feature the oracle and sweeps fan out over
//! rayon; without it everything runs sequentially.

pub mod cli;
pub mod criterion;
pub mod enumeration;
pub mod galeryser;
pub mod seqcore;

pub use criterion::{theorem_main, CanonicalDecomposition, CanonicalPair, CriterionReport, Verdict};
pub use enumeration::{brute_force_all_graphic, ClassWitness, OracleVerdict};
pub use galeryser::{gale_ryser, realize, zz_check, BipartiteRealization, PairVerdict};
pub use seqcore::{class_nonempty, min_cap_sum, s_range, ClassParams, DegreeSequence};

/// Execution strategy for the data-parallel loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_ordered<T, U, F>(items: &[T], exec: Exec, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
