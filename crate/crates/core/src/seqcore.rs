//! Degree sequences, run-length block form, class parameters and the
//! min-cap sum primitive shared by every graphicality test.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

/// Largest accepted value for a, c, m, n and S. Keeps every intermediate
/// product of the criterion arithmetic below 2^62.
pub const INPUT_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("sequence is empty")]
    EmptyInput,
    #[error("entry {value} at position {position} is negative")]
    NegativeEntry { position: usize, value: i64 },
    #[error("sequence is not decreasing at position {position} ({prev} < {next})")]
    NotDecreasing { position: usize, prev: u64, next: u64 },
}

/// A non-strictly decreasing, nonempty sequence of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DegreeSequence {
    entries: Vec<u64>,
}

/// Result of lenient validation: the sequence plus whether sorting was needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lenient {
    pub sequence: DegreeSequence,
    pub sorted: bool,
}

impl DegreeSequence {
    /// Strict validation: rejects unsorted input.
    pub fn new_strict(raw: &[i64]) -> Result<Self, SeqError> {
        Self::from_entries(check_nonnegative(raw)?)
    }

    /// Lenient validation: sorts descending and reports whether it had to.
    pub fn new_lenient(raw: &[i64]) -> Result<Lenient, SeqError> {
        let mut entries = check_nonnegative(raw)?;
        let sorted = entries.windows(2).any(|w| w[0] < w[1]);
        if sorted {
            entries.sort_unstable_by(|x, y| y.cmp(x));
        }
        Ok(Lenient {
            sequence: DegreeSequence { entries },
            sorted,
        })
    }

    /// Validates an already nonnegative vector.
    pub fn from_entries(entries: Vec<u64>) -> Result<Self, SeqError> {
        if entries.is_empty() {
            return Err(SeqError::EmptyInput);
        }
        if let Some(i) = entries.windows(2).position(|w| w[0] < w[1]) {
            return Err(SeqError::NotDecreasing {
                position: i + 2,
                prev: entries[i],
                next: entries[i + 1],
            });
        }
        Ok(DegreeSequence { entries })
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<u64>) -> Self {
        debug_assert!(!entries.is_empty());
        debug_assert!(entries.windows(2).all(|w| w[0] >= w[1]));
        DegreeSequence { entries }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max(&self) -> u64 {
        self.entries[0]
    }

    pub fn min(&self) -> u64 {
        self.entries[self.entries.len() - 1]
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// Sum of the first `k` entries (1-based count).
    pub fn prefix_sum(&self, k: usize) -> u64 {
        self.entries.iter().take(k).sum()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.entries.iter().map(|&v| v * v).sum()
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

fn check_nonnegative(raw: &[i64]) -> Result<Vec<u64>, SeqError> {
    if raw.is_empty() {
        return Err(SeqError::EmptyInput);
    }
    raw.iter()
        .enumerate()
        .map(|(i, &v)| {
            u64::try_from(v).map_err(|_| SeqError::NegativeEntry {
                position: i + 1,
                value: v,
            })
        })
        .collect()
}

/// Σ_i min(k, f_i): the k-th partial sum of the conjugate of `f`.
pub fn min_cap_sum(f: &DegreeSequence, k: u64) -> u64 {
    f.entries.iter().map(|&v| v.min(k)).sum()
}

/// Run-length encoding of a decreasing sequence: (value, multiplicity)
/// blocks with strictly decreasing values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    blocks: Vec<(u64, usize)>,
}

impl BlockForm {
    pub fn blocks(&self) -> &[(u64, usize)] {
        &self.blocks
    }

    /// Cumulative block ends l_1, l_1+l_2, ..., i.e. the strong indices.
    pub fn boundaries(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().scan(0usize, |acc, &(_, len)| {
            *acc += len;
            Some(*acc)
        })
    }

    pub fn expand(&self) -> DegreeSequence {
        let entries = self
            .blocks
            .iter()
            .flat_map(|&(v, len)| std::iter::repeat_n(v, len))
            .collect();
        DegreeSequence::from_entries_unchecked(entries)
    }
}

pub fn to_blocks(x: &DegreeSequence) -> BlockForm {
    let mut blocks: Vec<(u64, usize)> = Vec::new();
    for &v in x.entries() {
        match blocks.last_mut() {
            Some((value, len)) if *value == v => *len += 1,
            _ => blocks.push((v, 1)),
        }
    }
    BlockForm { blocks }
}

/// A hypothesis of the class criterion that a parameter tuple violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("parameter {name} = {value} is negative")]
    Negative { name: &'static str, value: i64 },
    #[error("parameter {name} = {value} exceeds the supported bound {INPUT_BOUND}")]
    TooLarge { name: &'static str, value: i64 },
    #[error("requires m ≥ 1 and n ≥ 1")]
    ZeroLength,
    #[error("requires a ≥ b (a = {a}, b = {b})")]
    MaxBelowMinLeft { a: u64, b: u64 },
    #[error("requires c ≥ d (c = {c}, d = {d})")]
    MaxBelowMinRight { c: u64, d: u64 },
    #[error("requires n ≥ a (n = {n}, a = {a})")]
    LeftMaxExceedsRightLength { a: u64, n: u64 },
    #[error("requires m ≥ c (m = {m}, c = {c})")]
    RightMaxExceedsLeftLength { c: u64, m: u64 },
    #[error("requires max(mb, nd) ≤ S ≤ min(ma, nc) (S = {s}, allowed range [{lo}, {hi}])")]
    SumOutOfRange { s: u64, lo: u64, hi: u64 },
}

/// The seven integers (a, b, c, d, m, n, S) naming the class of sequence
/// pairs with lengths m and n, common sum S, left max/min a/b and right
/// max/min c/d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ClassParams {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub m: u64,
    pub n: u64,
    #[serde(rename = "S")]
    pub s: u64,
}

impl ClassParams {
    /// Validates the raw tuple against every hypothesis, naming the first
    /// one that fails.
    pub fn new(a: i64, b: i64, c: i64, d: i64, m: i64, n: i64, s: i64) -> Result<Self, ParamError> {
        let a = bounded("a", a)?;
        let b = bounded("b", b)?;
        let c = bounded("c", c)?;
        let d = bounded("d", d)?;
        let m = bounded("m", m)?;
        let n = bounded("n", n)?;
        let s = bounded("S", s)?;
        check_shape(a, b, c, d, m, n)?;
        let range = s_range(a, b, c, d, m, n);
        if !range.contains(&s) {
            return Err(ParamError::SumOutOfRange {
                s,
                lo: *range.start(),
                hi: *range.end(),
            });
        }
        Ok(ClassParams { a, b, c, d, m, n, s })
    }

    pub fn from_unsigned(a: u64, b: u64, c: u64, d: u64, m: u64, n: u64, s: u64) -> Result<Self, ParamError> {
        let conv = |v: u64| i64::try_from(v).unwrap_or(i64::MAX);
        Self::new(conv(a), conv(b), conv(c), conv(d), conv(m), conv(n), conv(s))
    }
}

impl fmt::Display for ClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a={}, b={}, c={}, d={}, m={}, n={}, S={})",
            self.a, self.b, self.c, self.d, self.m, self.n, self.s
        )
    }
}

fn bounded(name: &'static str, value: i64) -> Result<u64, ParamError> {
    if value < 0 {
        return Err(ParamError::Negative { name, value });
    }
    if value as u64 > INPUT_BOUND {
        return Err(ParamError::TooLarge { name, value });
    }
    Ok(value as u64)
}

/// Checks the S-independent hypotheses: a ≥ b, c ≥ d, n ≥ a, m ≥ c and
/// positive lengths.
pub fn check_shape(a: u64, b: u64, c: u64, d: u64, m: u64, n: u64) -> Result<(), ParamError> {
    if m == 0 || n == 0 {
        return Err(ParamError::ZeroLength);
    }
    if a < b {
        return Err(ParamError::MaxBelowMinLeft { a, b });
    }
    if c < d {
        return Err(ParamError::MaxBelowMinRight { c, d });
    }
    if n < a {
        return Err(ParamError::LeftMaxExceedsRightLength { a, n });
    }
    if m < c {
        return Err(ParamError::RightMaxExceedsLeftLength { c, m });
    }
    Ok(())
}

/// Every S worth testing for the given shape: [max(mb, nd), min(ma, nc)].
/// The range is empty when the lower end exceeds the upper.
pub fn s_range(a: u64, b: u64, c: u64, d: u64, m: u64, n: u64) -> RangeInclusive<u64> {
    (m * b).max(n * d)..=(m * a).min(n * c)
}

/// Whether some decreasing sequence of length `len` starts at exactly
/// `max`, ends at exactly `min`, and sums to `sum`.
pub fn side_nonempty(max: u64, min: u64, len: u64, sum: u64) -> bool {
    if len == 0 || max < min {
        return false;
    }
    if len == 1 {
        return max == min && max == sum;
    }
    let lo = max + min * (len - 1);
    let hi = max * (len - 1) + min;
    lo <= sum && sum <= hi
}

/// Exact nonemptiness of the class. Tighter than the S-range hypothesis
/// whenever a > b or c > d.
pub fn class_nonempty(params: &ClassParams) -> bool {
    let p = params;
    side_nonempty(p.a, p.b, p.m, p.s) && side_nonempty(p.c, p.d, p.n, p.s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[u64]) -> DegreeSequence {
        DegreeSequence::from_entries(v.to_vec()).unwrap()
    }

    #[test]
    fn validation_modes() {
        assert_eq!(DegreeSequence::new_strict(&[3, 2, 2, 1]).unwrap(), seq(&[3, 2, 2, 1]));
        assert!(matches!(
            DegreeSequence::new_strict(&[1, 2]),
            Err(SeqError::NotDecreasing { position: 2, .. })
        ));
        let lenient = DegreeSequence::new_lenient(&[1, 2]).unwrap();
        assert_eq!(lenient.sequence, seq(&[2, 1]));
        assert!(lenient.sorted);
        assert!(!DegreeSequence::new_lenient(&[2, 1]).unwrap().sorted);
        assert_eq!(DegreeSequence::new_strict(&[]), Err(SeqError::EmptyInput));
        assert_eq!(
            DegreeSequence::new_lenient(&[2, -1]),
            Err(SeqError::NegativeEntry { position: 2, value: -1 })
        );
    }

    #[test]
    fn min_cap_sum_examples() {
        assert_eq!(min_cap_sum(&seq(&[2, 2]), 1), 2);
        assert_eq!(min_cap_sum(&seq(&[4, 4, 1, 1]), 2), 6);
        assert_eq!(min_cap_sum(&seq(&[3, 3, 1, 1]), 0), 0);
    }

    #[test]
    fn block_examples() {
        assert_eq!(to_blocks(&seq(&[3, 2, 2, 1])).blocks(), &[(3, 1), (2, 2), (1, 1)]);
        assert_eq!(to_blocks(&seq(&[5, 5, 5])).blocks(), &[(5, 3)]);
        let b = to_blocks(&seq(&[4, 4, 1, 1]));
        assert_eq!(b.blocks(), &[(4, 2), (1, 2)]);
        assert_eq!(b.boundaries().collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn nonempty_examples() {
        let p = ClassParams::new(2, 1, 2, 1, 3, 3, 4).unwrap();
        assert!(class_nonempty(&p));
        let p = ClassParams::new(2, 1, 2, 1, 3, 3, 3).unwrap();
        assert!(!class_nonempty(&p));
        let p = ClassParams::new(3, 3, 3, 3, 4, 4, 12).unwrap();
        assert!(class_nonempty(&p));
    }

    #[test]
    fn s_range_examples() {
        assert_eq!(s_range(2, 1, 2, 1, 3, 3), 3..=6);
        assert_eq!(s_range(4, 1, 4, 1, 4, 4), 4..=16);
        assert_eq!(s_range(3, 3, 2, 1, 4, 7), 12..=12);
        assert!(s_range(3, 3, 1, 1, 4, 3).is_empty());
    }

    #[test]
    fn params_name_the_violated_hypothesis() {
        let err = ClassParams::new(3, 4, 2, 1, 4, 4, 12).unwrap_err();
        assert!(err.to_string().contains("requires a ≥ b"));
        assert!(matches!(
            ClassParams::new(5, 1, 2, 1, 4, 4, 8),
            Err(ParamError::LeftMaxExceedsRightLength { .. })
        ));
        assert!(matches!(
            ClassParams::new(2, 1, 2, 1, 3, 3, 7),
            Err(ParamError::SumOutOfRange { lo: 3, hi: 6, .. })
        ));
        assert!(matches!(ClassParams::new(2, -1, 2, 1, 3, 3, 4), Err(ParamError::Negative { .. })));
        assert!(matches!(
            ClassParams::new(2, 1, 2, 1, 3, 3, 1 << 21),
            Err(ParamError::TooLarge { name: "S", .. })
        ));
    }

    fn decreasing() -> impl Strategy<Value = DegreeSequence> {
        proptest::collection::vec(0u64..40, 1..30).prop_map(|mut v| {
            v.sort_unstable_by(|x, y| y.cmp(x));
            DegreeSequence::from_entries(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn min_cap_sum_monotone_and_concave(f in decreasing()) {
            let top = f.max() + 3;
            let vals: Vec<u64> = (0..=top).map(|k| min_cap_sum(&f, k)).collect();
            prop_assert_eq!(vals[0], 0);
            for k in 0..vals.len() - 1 {
                let inc = vals[k + 1] - vals[k];
                prop_assert!(inc as usize <= f.len());
                if k + 2 < vals.len() {
                    prop_assert!(vals[k + 2] - vals[k + 1] <= inc);
                }
            }
            for k in f.max()..=top {
                prop_assert_eq!(vals[k as usize], f.sum());
            }
        }

        #[test]
        fn blocks_round_trip(f in decreasing()) {
            let blocks = to_blocks(&f);
            prop_assert!(blocks.blocks().windows(2).all(|w| w[0].0 > w[1].0));
            prop_assert_eq!(blocks.boundaries().last(), Some(f.len()));
            prop_assert_eq!(blocks.expand(), f);
        }
    }
}
