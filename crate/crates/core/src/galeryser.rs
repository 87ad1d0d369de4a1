//! Graphicality of a concrete pair of sequences: the full Gale–Ryser
//! dominance test, its strong-index refinement that only probes block
//! boundaries, and a greedy constructive realization.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::seqcore::{to_blocks, DegreeSequence};

/// Outcome of a pair test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub graphic: bool,
    /// Smallest probed k with prefix_sum(e, k) > min_cap_sum(f, k).
    pub failing_k: Option<usize>,
    pub sums_equal: bool,
}

impl PairVerdict {
    fn unequal_sums() -> Self {
        PairVerdict {
            graphic: false,
            failing_k: None,
            sums_equal: false,
        }
    }
}

/// Prefix sums of the conjugate of a sequence, restricted to k ≤ `limit`.
/// Answers min_cap_sum(f, k) in O(1) after O(n + limit) setup.
struct Conjugate {
    prefix: Vec<u64>,
    total: u64,
}

impl Conjugate {
    fn new(f: &[u64], limit: usize) -> Self {
        let cap = f.first().map_or(0, |&v| v.min(limit as u64) as usize);
        // at_least[v] = #{i : f_i ≥ v} for v in 1..=cap
        let mut at_least = vec![0u64; cap + 2];
        for &v in f {
            at_least[(v as usize).min(cap)] += 1;
        }
        for v in (1..=cap).rev() {
            at_least[v] += at_least[v + 1];
        }
        let mut prefix = Vec::with_capacity(cap + 1);
        prefix.push(0);
        for v in 1..=cap {
            let last = prefix[v - 1];
            prefix.push(last + at_least[v]);
        }
        Conjugate {
            prefix,
            total: f.iter().sum(),
        }
    }

    fn min_cap_sum(&self, k: usize) -> u64 {
        self.prefix.get(k).copied().unwrap_or(self.total)
    }
}

/// Full Gale–Ryser test: equal sums and prefix_sum(e, k) ≤ Σ min(k, f_i)
/// for every k in 1..=len(e).
pub fn gale_ryser(e: &DegreeSequence, f: &DegreeSequence) -> PairVerdict {
    if e.sum() != f.sum() {
        return PairVerdict::unequal_sums();
    }
    let conj = Conjugate::new(f.entries(), e.len());
    let mut prefix = 0u64;
    for (i, &v) in e.entries().iter().enumerate() {
        prefix += v;
        let k = i + 1;
        if prefix > conj.min_cap_sum(k) {
            return PairVerdict {
                graphic: false,
                failing_k: Some(k),
                sums_equal: true,
            };
        }
    }
    PairVerdict {
        graphic: true,
        failing_k: None,
        sums_equal: true,
    }
}

/// Strong-index refinement: the dominance inequality only needs checking
/// at the cumulative block ends of `x`. Zero entries are stripped first.
pub fn zz_check(x: &DegreeSequence, y: &DegreeSequence) -> PairVerdict {
    let xs = strip_zeros(x.entries());
    let ys = strip_zeros(y.entries());
    let total: u64 = xs.iter().sum();
    if total != ys.iter().sum::<u64>() {
        return PairVerdict::unequal_sums();
    }
    if xs.is_empty() {
        return PairVerdict {
            graphic: true,
            failing_k: None,
            sums_equal: true,
        };
    }
    let xs = DegreeSequence::from_entries_unchecked(xs.to_vec());
    let conj = Conjugate::new(ys, xs.len());
    let mut prefix = 0u64;
    let mut k = 0usize;
    for &(value, len) in to_blocks(&xs).blocks() {
        prefix += value * len as u64;
        k += len;
        if prefix > conj.min_cap_sum(k) {
            return PairVerdict {
                graphic: false,
                failing_k: Some(k),
                sums_equal: true,
            };
        }
    }
    PairVerdict {
        graphic: true,
        failing_k: None,
        sums_equal: true,
    }
}

fn strip_zeros(v: &[u64]) -> &[u64] {
    let end = v.partition_point(|&x| x > 0);
    &v[..end]
}

/// With equal sums and len(x) = m, the k = m dominance inequality holds
/// exactly when y_1 ≤ m.
pub fn last_index_shortcut(y: &DegreeSequence, m: u64) -> bool {
    y.max() <= m
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("pair is not bipartite graphic ({})", describe(.verdict))]
    NotGraphic { verdict: PairVerdict },
}

fn describe(v: &PairVerdict) -> String {
    match (v.sums_equal, v.failing_k) {
        (false, _) => "sums differ".to_string(),
        (true, Some(k)) => format!("dominance fails at k={k}"),
        (true, None) => "greedy construction failed".to_string(),
    }
}

/// A simple bipartite graph with 1-based (left, right) edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteRealization {
    pub left_degrees: DegreeSequence,
    pub right_degrees: DegreeSequence,
    pub edges: BTreeSet<(usize, usize)>,
}

impl BipartiteRealization {
    /// True iff every vertex has exactly its prescribed degree.
    pub fn degrees_match(&self) -> bool {
        let mut left = vec![0u64; self.left_degrees.len()];
        let mut right = vec![0u64; self.right_degrees.len()];
        for &(i, j) in &self.edges {
            if i == 0 || j == 0 || i > left.len() || j > right.len() {
                return false;
            }
            left[i - 1] += 1;
            right[j - 1] += 1;
        }
        left == self.left_degrees.entries() && right == self.right_degrees.entries()
    }
}

/// Builds a realization by connecting each left vertex, in decreasing
/// degree order, to the right vertices of largest residual demand (ties to
/// the smallest index).
pub fn realize(e: &DegreeSequence, f: &DegreeSequence) -> Result<BipartiteRealization, RealizeError> {
    let verdict = gale_ryser(e, f);
    if !verdict.graphic {
        return Err(RealizeError::NotGraphic { verdict });
    }
    let mut residual: Vec<u64> = f.entries().to_vec();
    let mut order: Vec<usize> = (0..residual.len()).collect();
    let mut edges = BTreeSet::new();
    for (i, &deg) in e.entries().iter().enumerate() {
        order.sort_by(|&x, &y| residual[y].cmp(&residual[x]).then(x.cmp(&y)));
        for &j in order.iter().take(deg as usize) {
            if residual[j] == 0 {
                return Err(RealizeError::NotGraphic { verdict });
            }
            residual[j] -= 1;
            edges.insert((i + 1, j + 1));
        }
    }
    let graph = BipartiteRealization {
        left_degrees: e.clone(),
        right_degrees: f.clone(),
        edges,
    };
    if !graph.degrees_match() {
        return Err(RealizeError::NotGraphic { verdict });
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::min_cap_sum;

    fn seq(v: &[u64]) -> DegreeSequence {
        DegreeSequence::from_entries(v.to_vec()).unwrap()
    }

    #[test]
    fn gale_ryser_examples() {
        assert!(gale_ryser(&seq(&[2, 2]), &seq(&[2, 2])).graphic);
        let v = gale_ryser(&seq(&[4, 4, 1, 1]), &seq(&[4, 4, 1, 1]));
        assert_eq!(
            v,
            PairVerdict {
                graphic: false,
                failing_k: Some(2),
                sums_equal: true
            }
        );
        assert!(gale_ryser(&seq(&[3, 2, 2, 1]), &seq(&[3, 3, 1, 1])).graphic);
        let v = gale_ryser(&seq(&[3]), &seq(&[1, 1]));
        assert!(!v.graphic && !v.sums_equal && v.failing_k.is_none());
    }

    #[test]
    fn gale_ryser_with_zeros() {
        assert!(gale_ryser(&seq(&[2, 0]), &seq(&[1, 1, 0])).graphic);
        assert!(gale_ryser(&seq(&[0]), &seq(&[0, 0])).graphic);
        assert_eq!(gale_ryser(&seq(&[3, 0]), &seq(&[1, 1, 1])).failing_k, None);
        assert_eq!(gale_ryser(&seq(&[4, 0]), &seq(&[2, 1, 1])).failing_k, Some(1));
    }

    #[test]
    fn zz_examples() {
        let v = zz_check(&seq(&[3, 2, 2, 1]), &seq(&[3, 3, 1, 1]));
        assert!(v.graphic);
        let v = zz_check(&seq(&[4, 4, 1, 1]), &seq(&[4, 4, 1, 1]));
        assert_eq!(v.failing_k, Some(2));
        assert!(zz_check(&seq(&[5, 5, 5]), &seq(&[3, 3, 3, 3, 3])).graphic);
        assert!(zz_check(&seq(&[0, 0]), &seq(&[0])).graphic);
        assert!(!zz_check(&seq(&[2, 0]), &seq(&[3])).graphic);
    }

    #[test]
    fn shortcut_examples() {
        assert!(last_index_shortcut(&seq(&[3, 3, 1, 1]), 4));
        assert!(!last_index_shortcut(&seq(&[5, 1]), 4));
        let y = seq(&[4, 4, 1, 1]);
        assert!(last_index_shortcut(&y, 4));
        assert_eq!(min_cap_sum(&y, 4), 10);
        assert_eq!(seq(&[4, 4, 1, 1]).prefix_sum(4), 10);
    }

    #[test]
    fn realize_examples() {
        let g = realize(&seq(&[2, 1]), &seq(&[2, 1])).unwrap();
        assert_eq!(g.edges, BTreeSet::from([(1, 1), (1, 2), (2, 1)]));
        let g = realize(&seq(&[3]), &seq(&[1, 1, 1])).unwrap();
        assert_eq!(g.edges, BTreeSet::from([(1, 1), (1, 2), (1, 3)]));
        let g = realize(&seq(&[2, 2]), &seq(&[2, 2])).unwrap();
        assert_eq!(g.edges, BTreeSet::from([(1, 1), (1, 2), (2, 1), (2, 2)]));
        assert!(matches!(
            realize(&seq(&[4, 4, 1, 1]), &seq(&[4, 4, 1, 1])),
            Err(RealizeError::NotGraphic { .. })
        ));
    }
}
