//! Exhaustive generation of a class and the brute-force oracle that checks
//! every member pair.
//!
//! Sequences are produced in reverse-lexicographic order. The oracle tests
//! pairs with the block-boundary check and re-runs the full Gale–Ryser test
//! on a deterministic 1-in-1000 subsample. It never consults the closed-form
//! criterion, so comparing the two is a genuine cross-check.

use serde::Serialize;
use thiserror::Error;

use crate::galeryser::{gale_ryser, zz_check};
use crate::seqcore::{ClassParams, DegreeSequence};
use crate::Exec;

/// Default refusal threshold for oracle runs, in pairs.
pub const DEFAULT_ORACLE_BUDGET: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ORACLE_BUDGET`].
pub const ORACLE_BUDGET_ENV: &str = "BGSEQ_ORACLE_BUDGET";

const SPOT_CHECK_STRIDE: u64 = 1000;

/// Streams the decreasing sequences of length `len` with first entry `max`,
/// last entry `min` and total `sum`, largest first.
#[derive(Debug, Clone)]
pub struct SequenceIter {
    max: u64,
    min: u64,
    len: usize,
    /// Interior entries (positions 2..len-1).
    interior: Vec<u64>,
    /// remaining[i] = interior sum still owed from position i onwards.
    remaining: Vec<u64>,
    state: IterState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

pub fn enum_sequences(max: u64, min: u64, len: usize, sum: u64) -> SequenceIter {
    let interior_len = len.saturating_sub(2);
    SequenceIter {
        max,
        min,
        len,
        interior: vec![0; interior_len],
        remaining: vec![0; interior_len + 1],
        state: IterState::Fresh,
    }
    .primed(sum)
}

impl SequenceIter {
    fn primed(mut self, sum: u64) -> Self {
        let (max, min, len) = (self.max, self.min, self.len);
        let ok = match len {
            0 => false,
            1 => max == min && max == sum,
            _ => max >= min && sum >= max + min && {
                self.remaining[0] = sum - max - min;
                self.fill_from(0)
            },
        };
        if !ok {
            self.state = IterState::Done;
        }
        self
    }

    /// Upper bound for position `i` of the interior.
    fn cap(&self, i: usize) -> u64 {
        if i == 0 {
            self.max
        } else {
            self.interior[i - 1]
        }
    }

    /// Greedily assigns the largest feasible values to positions `i..`.
    fn fill_from(&mut self, start: usize) -> bool {
        for i in start..self.interior.len() {
            let rest = (self.interior.len() - i - 1) as u64;
            let owed = self.remaining[i];
            let Some(floor_rest) = rest.checked_mul(self.min).filter(|&f| f <= owed) else {
                return false;
            };
            let v = self.cap(i).min(owed - floor_rest);
            if v < self.min || v * (rest + 1) < owed {
                return false;
            }
            self.interior[i] = v;
            self.remaining[i + 1] = owed - v;
        }
        self.remaining[self.interior.len()] == 0
    }

    /// Moves to the reverse-lexicographic successor.
    fn advance(&mut self) -> bool {
        // The last interior entry is forced by the sum, so start one earlier.
        let k = self.interior.len();
        for i in (0..k.saturating_sub(1)).rev() {
            let rest = (k - i - 1) as u64;
            let owed = self.remaining[i];
            let v = self.interior[i];
            if v == self.min {
                continue;
            }
            let v = v - 1;
            if v * (rest + 1) < owed {
                continue;
            }
            self.interior[i] = v;
            self.remaining[i + 1] = owed - v;
            if self.fill_from(i + 1) {
                return true;
            }
        }
        false
    }

    fn current(&self) -> DegreeSequence {
        let mut entries = Vec::with_capacity(self.len);
        entries.push(self.max);
        entries.extend_from_slice(&self.interior);
        if self.len >= 2 {
            entries.push(self.min);
        }
        DegreeSequence::from_entries_unchecked(entries)
    }
}

impl Iterator for SequenceIter {
    type Item = DegreeSequence;

    fn next(&mut self) -> Option<DegreeSequence> {
        match self.state {
            IterState::Done => None,
            IterState::Fresh => {
                self.state = IterState::Running;
                Some(self.current())
            }
            IterState::Running => {
                if self.advance() {
                    Some(self.current())
                } else {
                    self.state = IterState::Done;
                    None
                }
            }
        }
    }
}

/// All pairs of the class, left sequence outermost. The right side is
/// materialized once; the left side is streamed.
pub fn enum_class(params: &ClassParams) -> impl Iterator<Item = (DegreeSequence, DegreeSequence)> {
    let right: Vec<DegreeSequence> = enum_sequences(params.c, params.d, params.n as usize, params.s).collect();
    enum_sequences(params.a, params.b, params.m as usize, params.s)
        .flat_map(move |e| right.clone().into_iter().map(move |f| (e.clone(), f)))
}

/// Number of sequences `enum_sequences(max, min, len, sum)` yields, computed
/// without enumeration. Saturates at `u128::MAX`.
pub fn count_sequences(max: u64, min: u64, len: usize, sum: u64) -> u128 {
    match len {
        0 => 0,
        1 => u128::from(max == min && max == sum),
        _ => {
            if max < min || sum < max + min {
                return 0;
            }
            let parts = (len - 2) as u64;
            let Some(shifted) = (sum - max - min).checked_sub(parts * min) else {
                return 0;
            };
            box_partitions(shifted, parts, max - min)
        }
    }
}

/// Partitions of `total` into at most `parts` parts, each at most `width`:
/// the coefficient of q^total in the Gaussian binomial [parts+width, parts].
fn box_partitions(total: u64, parts: u64, width: u64) -> u128 {
    let Some(area) = parts.checked_mul(width) else {
        return u128::MAX;
    };
    if total > area {
        return 0;
    }
    // Conjugation and complement symmetries shrink the table.
    let (parts, width) = if parts <= width { (parts, width) } else { (width, parts) };
    let total = total.min(area - total) as usize;
    // Build [width+j, j]_q for j = 1..=parts via
    // [width+j, j] = [width+j-1, j-1] * (1 - q^(width+j)) / (1 - q^j).
    let mut poly = vec![0i128; total + 1];
    poly[0] = 1;
    for j in 1..=parts {
        let shift = (width + j) as usize;
        for deg in (shift..=total).rev() {
            poly[deg] -= poly[deg - shift];
        }
        let stride = j as usize;
        for deg in stride..=total {
            match poly[deg].checked_add(poly[deg - stride]) {
                Some(v) => poly[deg] = v,
                None => return u128::MAX,
            }
        }
    }
    u128::try_from(poly[total]).unwrap_or(u128::MAX)
}

/// |P(a,b,c,d,m,n,S)| without enumeration.
pub fn count_class(params: &ClassParams) -> u128 {
    let left = count_sequences(params.a, params.b, params.m as usize, params.s);
    if left == 0 {
        return 0;
    }
    let right = count_sequences(params.c, params.d, params.n as usize, params.s);
    left.saturating_mul(right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleVerdict {
    AllGraphic,
    FoundNonGraphic,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub left: DegreeSequence,
    pub right: DegreeSequence,
    pub failing_k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassWitness {
    pub verdict: OracleVerdict,
    pub witness: Option<Witness>,
}

/// Checks every pair of the class, reporting the first non-graphic pair in
/// enumeration order.
pub fn brute_force_all_graphic(params: &ClassParams) -> ClassWitness {
    brute_force_all_graphic_with(params, Exec::default())
}

pub fn brute_force_all_graphic_with(params: &ClassParams, exec: Exec) -> ClassWitness {
    let left: Vec<DegreeSequence> = enum_sequences(params.a, params.b, params.m as usize, params.s).collect();
    let right: Vec<DegreeSequence> = enum_sequences(params.c, params.d, params.n as usize, params.s).collect();
    if left.is_empty() || right.is_empty() {
        return ClassWitness {
            verdict: OracleVerdict::Empty,
            witness: None,
        };
    }
    let row = |(i, e): (usize, &DegreeSequence)| first_failure(i, e, &right);
    let found = match exec {
        Exec::Sequential => left.iter().enumerate().find_map(row),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            left.par_iter().enumerate().find_map_first(row)
        }
        #[cfg(not(feature = "parallel"))]
        Exec::Parallel => left.iter().enumerate().find_map(row),
    };
    match found {
        Some(w) => ClassWitness {
            verdict: OracleVerdict::FoundNonGraphic,
            witness: Some(w),
        },
        None => ClassWitness {
            verdict: OracleVerdict::AllGraphic,
            witness: None,
        },
    }
}

fn first_failure(row: usize, e: &DegreeSequence, right: &[DegreeSequence]) -> Option<Witness> {
    let base = row as u64 * right.len() as u64;
    right.iter().enumerate().find_map(|(j, f)| {
        let fast = zz_check(e, f);
        let index = base + j as u64;
        if index.is_multiple_of(SPOT_CHECK_STRIDE) || !fast.graphic {
            let full = gale_ryser(e, f);
            assert_eq!(
                fast.graphic, full.graphic,
                "block-boundary and full Gale–Ryser disagree on {e} / {f}"
            );
        }
        if fast.graphic {
            return None;
        }
        Some(Witness {
            left: e.clone(),
            right: f.clone(),
            failing_k: gale_ryser(e, f).failing_k.expect("equal sums inside a class"),
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("class has {count} pairs, above the oracle budget of {budget} (raise {ORACLE_BUDGET_ENV} or disable the budget)")]
pub struct BudgetExceeded {
    pub count: u128,
    pub budget: u128,
}

/// Budget from the environment, falling back to the default.
pub fn oracle_budget_from_env() -> u128 {
    std::env::var(ORACLE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

/// Runs the oracle only when the class size is within `budget` pairs.
pub fn brute_force_within_budget(params: &ClassParams, budget: Option<u128>) -> Result<ClassWitness, BudgetExceeded> {
    if let Some(budget) = budget {
        let count = count_class(params);
        if count > budget {
            return Err(BudgetExceeded { count, budget });
        }
    }
    Ok(brute_force_all_graphic(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(v: &[&[u64]]) -> Vec<DegreeSequence> {
        v.iter()
            .map(|s| DegreeSequence::from_entries(s.to_vec()).unwrap())
            .collect()
    }

    fn params(v: [i64; 7]) -> ClassParams {
        ClassParams::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6]).unwrap()
    }

    #[test]
    fn enum_sequences_examples() {
        assert_eq!(enum_sequences(2, 1, 3, 4).collect::<Vec<_>>(), seqs(&[&[2, 1, 1]]));
        assert_eq!(enum_sequences(3, 1, 3, 6).collect::<Vec<_>>(), seqs(&[&[3, 2, 1]]));
        assert_eq!(enum_sequences(2, 1, 3, 3).count(), 0);
        assert_eq!(enum_sequences(3, 3, 2, 6).collect::<Vec<_>>(), seqs(&[&[3, 3]]));
        assert_eq!(enum_sequences(5, 5, 1, 5).collect::<Vec<_>>(), seqs(&[&[5]]));
        assert_eq!(enum_sequences(5, 4, 1, 5).count(), 0);
    }

    #[test]
    fn enum_sequences_reverse_lex() {
        let got: Vec<_> = enum_sequences(4, 1, 5, 12).collect();
        assert_eq!(
            got,
            seqs(&[
                &[4, 4, 2, 1, 1],
                &[4, 3, 3, 1, 1],
                &[4, 3, 2, 2, 1],
            ])
        );
    }

    #[test]
    fn class_fixture_4141_4_4_10() {
        // Frozen from the generator; cross-checked by count_class below.
        let side = seqs(&[&[4, 4, 1, 1], &[4, 3, 2, 1]]);
        let p = params([4, 1, 4, 1, 4, 4, 10]);
        assert_eq!(enum_sequences(4, 1, 4, 10).collect::<Vec<_>>(), side);
        let pairs: Vec<_> = enum_class(&p).collect();
        assert_eq!(pairs.len(), 4);
        assert_eq!(pairs[0], (side[0].clone(), side[0].clone()));
        assert_eq!(pairs[1], (side[0].clone(), side[1].clone()));
        assert_eq!(pairs[3], (side[1].clone(), side[1].clone()));
        assert_eq!(count_class(&p), 4);
    }

    #[test]
    fn oracle_examples() {
        let w = brute_force_all_graphic(&params([2, 1, 2, 1, 3, 3, 4]));
        assert_eq!(w.verdict, OracleVerdict::AllGraphic);
        let w = brute_force_all_graphic(&params([4, 1, 4, 1, 4, 4, 10]));
        assert_eq!(w.verdict, OracleVerdict::FoundNonGraphic);
        assert_eq!(
            w.witness,
            Some(Witness {
                left: seqs(&[&[4, 4, 1, 1]])[0].clone(),
                right: seqs(&[&[4, 4, 1, 1]])[0].clone(),
                failing_k: 2,
            })
        );
        let w = brute_force_all_graphic(&params([2, 1, 2, 1, 3, 3, 3]));
        assert_eq!(w.verdict, OracleVerdict::Empty);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let p = params([5, 1, 5, 1, 6, 6, 14]);
        assert_eq!(
            brute_force_all_graphic_with(&p, Exec::Sequential),
            brute_force_all_graphic_with(&p, Exec::Parallel)
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_class(&params([2, 1, 2, 1, 3, 3, 4])), 1);
        assert_eq!(count_class(&params([2, 1, 2, 1, 3, 3, 3])), 0);
        assert_eq!(count_class(&params([3, 3, 3, 3, 4, 4, 12])), 1);
        // 7 into at most 3 parts each ≤ 3: 331, 322, 33 1? -> {3,3,1},{3,2,2},{3,3,1}...
        assert_eq!(box_partitions(7, 3, 3), 2);
        assert_eq!(box_partitions(0, 0, 0), 1);
        assert_eq!(box_partitions(4, 2, 2), 1);
        assert_eq!(box_partitions(2, 2, 2), 2);
    }

    #[test]
    fn budget_refusal() {
        let p = params([4, 1, 4, 1, 4, 4, 10]);
        assert_eq!(
            brute_force_within_budget(&p, Some(3)),
            Err(BudgetExceeded { count: 4, budget: 3 })
        );
        assert!(brute_force_within_budget(&p, Some(4)).is_ok());
        assert!(brute_force_within_budget(&p, None).is_ok());
    }
}
