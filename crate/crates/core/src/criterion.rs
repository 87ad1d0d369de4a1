//! Closed-form class criterion.
//!
//! For a class with a > b and c > d, every pair in the class is bipartite
//! graphic iff the extremal pair
//!
//! ```text
//! E = (a^r, b+q, b^(m-r-1)),   F = (c^s, d+p, d^(n-s-1))
//! ```
//!
//! is, which in turn reduces to the single inequality
//!
//! ```text
//! ar + cs <= S + rs + min{r-p-d, s-q-b, r+s-p-q-b-d+1, 0}
//! ```
//!
//! with r = ⌊(S-mb)/(a-b)⌋, s = ⌊(S-nd)/(c-d)⌋, p = S-cs-d(n-s) and
//! q = S-ar-b(m-r). Classes with a = b or c = d are always graphic.
//!
//! This module also carries the reduction machinery (prefix dominance and
//! the smoothing walk to F) and the sufficient condition for symmetric
//! pairs, 4mb ≥ (a+b)² - 1.

use serde::Serialize;
use thiserror::Error;

use crate::seqcore::{class_nonempty, ClassParams, DegreeSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("class is degenerate (a = b or c = d); no canonical decomposition")]
    DegenerateClass,
    #[error("class {0} is empty")]
    EmptyClass(ClassParams),
    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("sequence must start at {expected_max} and end at {expected_min} with {expected_max} > {expected_min} and length ≥ 2")]
    BadExtremes { expected_max: u64, expected_min: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CanonicalDecomposition {
    pub r: i64,
    pub s: i64,
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPair {
    #[serde(rename = "E")]
    pub left: DegreeSequence,
    #[serde(rename = "F")]
    pub right: DegreeSequence,
}

fn ensure_general(params: &ClassParams) -> Result<(), CriterionError> {
    if params.a == params.b || params.c == params.d {
        return Err(CriterionError::DegenerateClass);
    }
    if !class_nonempty(params) {
        return Err(CriterionError::EmptyClass(*params));
    }
    Ok(())
}

pub fn decompose(params: &ClassParams) -> Result<CanonicalDecomposition, CriterionError> {
    ensure_general(params)?;
    let [a, b, c, d, m, n, s_total] = signed(params);
    let r = (s_total - m * b) / (a - b);
    let s = (s_total - n * d) / (c - d);
    let p = s_total - c * s - d * (n - s);
    let q = s_total - a * r - b * (m - r);
    assert!(1 <= r && r < m, "r = {r} outside [1, m) for {params}");
    assert!(1 <= s && s < n, "s = {s} outside [1, n) for {params}");
    assert!(0 <= q && q < a - b, "q = {q} outside [0, a-b) for {params}");
    assert!(0 <= p && p < c - d, "p = {p} outside [0, c-d) for {params}");
    Ok(CanonicalDecomposition { r, s, p, q })
}

fn signed(p: &ClassParams) -> [i64; 7] {
    // ClassParams caps every field at 2^20, so these never truncate.
    [p.a, p.b, p.c, p.d, p.m, p.n, p.s].map(|v| v as i64)
}

/// The extremal sequence (max^count, min+extra, min^(len-count-1)).
pub fn canonical_sequence(max: u64, min: u64, len: usize, count: usize, extra: u64) -> DegreeSequence {
    let mut entries = Vec::with_capacity(len);
    entries.extend(std::iter::repeat_n(max, count));
    if count < len {
        entries.push(min + extra);
        entries.extend(std::iter::repeat_n(min, len - count - 1));
    }
    DegreeSequence::from_entries_unchecked(entries)
}

/// The canonical sequence for one side, computed from (max, min, len, sum).
/// Requires max > min and an exactly nonempty side.
pub fn canonical_side(max: u64, min: u64, len: usize, sum: u64) -> DegreeSequence {
    debug_assert!(max > min);
    let count = (sum - len as u64 * min) / (max - min);
    let extra = sum - max * count - min * (len as u64 - count);
    canonical_sequence(max, min, len, count as usize, extra)
}

pub fn canonical_pair(params: &ClassParams) -> Result<CanonicalPair, CriterionError> {
    let dec = decompose(params)?;
    let left = canonical_sequence(params.a, params.b, params.m as usize, dec.r as usize, dec.q as u64);
    let right = canonical_sequence(params.c, params.d, params.n as usize, dec.s as usize, dec.p as u64);
    for (seq, max, min, len) in [
        (&left, params.a, params.b, params.m),
        (&right, params.c, params.d, params.n),
    ] {
        assert!(
            seq.len() as u64 == len && seq.max() == max && seq.min() == min && seq.sum() == params.s,
            "canonical sequence {seq} escapes class {params}"
        );
    }
    Ok(CanonicalPair { left, right })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    AllGraphic,
    NotAllGraphic,
    VacuousEmptyClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    DegenerateEqualExtremes,
    GeneralInequality,
}

/// Which of the four candidates of the min-term attains the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinTermArgument {
    /// r - p - d
    RowSlack,
    /// s - q - b
    ColumnSlack,
    /// r + s - p - q - b - d + 1
    Combined,
    Zero,
}

impl MinTermArgument {
    pub fn expression(self) -> &'static str {
        match self {
            MinTermArgument::RowSlack => "r-p-d",
            MinTermArgument::ColumnSlack => "s-q-b",
            MinTermArgument::Combined => "r+s-p-q-b-d+1",
            MinTermArgument::Zero => "0",
        }
    }
}

/// The four candidates of the min-term in listed order.
pub fn min_term_candidates(dec: &CanonicalDecomposition, b: i64, d: i64) -> [(MinTermArgument, i64); 4] {
    let CanonicalDecomposition { r, s, p, q } = *dec;
    [
        (MinTermArgument::RowSlack, r - p - d),
        (MinTermArgument::ColumnSlack, s - q - b),
        (MinTermArgument::Combined, r + s - p - q - b - d + 1),
        (MinTermArgument::Zero, 0),
    ]
}

/// Smallest candidate; ties go to the first in listed order.
pub fn min_term(dec: &CanonicalDecomposition, b: i64, d: i64) -> (MinTermArgument, i64) {
    min_term_candidates(dec, b, d)
        .into_iter()
        .fold(None, |best: Option<(MinTermArgument, i64)>, cand| match best {
            Some(b) if b.1 <= cand.1 => Some(b),
            _ => Some(cand),
        })
        .expect("four candidates")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub params: ClassParams,
    pub verdict: Verdict,
    /// Absent for empty classes.
    pub branch: Option<Branch>,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub min_term: Option<i64>,
    pub min_term_argument: Option<MinTermArgument>,
    pub decomposition: Option<CanonicalDecomposition>,
    pub canonical: Option<CanonicalPair>,
}

/// Decides whether every pair of the class is bipartite graphic.
pub fn theorem_main(params: &ClassParams) -> CriterionReport {
    let mut report = CriterionReport {
        params: *params,
        verdict: Verdict::VacuousEmptyClass,
        branch: None,
        lhs: None,
        rhs: None,
        min_term: None,
        min_term_argument: None,
        decomposition: None,
        canonical: None,
    };
    if !class_nonempty(params) {
        return report;
    }
    if params.a == params.b || params.c == params.d {
        report.verdict = Verdict::AllGraphic;
        report.branch = Some(Branch::DegenerateEqualExtremes);
        return report;
    }
    let dec = decompose(params).expect("nonempty general class");
    let [a, b, c, d, _, _, s_total] = signed(params);
    let (arg, term) = min_term(&dec, b, d);
    let lhs = a * dec.r + c * dec.s;
    let rhs = s_total + dec.r * dec.s + term;
    report.verdict = if lhs <= rhs {
        Verdict::AllGraphic
    } else {
        Verdict::NotAllGraphic
    };
    report.branch = Some(Branch::GeneralInequality);
    report.lhs = Some(lhs);
    report.rhs = Some(rhs);
    report.min_term = Some(term);
    report.min_term_argument = Some(arg);
    report.decomposition = Some(dec);
    report.canonical = Some(canonical_pair(params).expect("nonempty general class"));
    report
}

/// Every prefix sum of `e` is at most the matching prefix sum of `dominant`.
pub fn dominates_prefix(e: &DegreeSequence, dominant: &DegreeSequence) -> Result<bool, CriterionError> {
    if e.len() != dominant.len() {
        return Err(CriterionError::LengthMismatch(e.len(), dominant.len()));
    }
    let mut lower = 0u64;
    let mut upper = 0u64;
    for (&x, &y) in e.entries().iter().zip(dominant.entries()) {
        lower += x;
        upper += y;
        if lower > upper {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmoothStep {
    Step(DegreeSequence),
    Fixpoint,
}

/// One smoothing move: raise the entry right after the last `max`, lower
/// the entry right before the first `min`. Sum, extremes and order are
/// preserved; no min-cap sum increases.
pub fn smooth_step(f: &DegreeSequence, max: u64, min: u64) -> Result<SmoothStep, CriterionError> {
    if f.len() < 2 || max <= min || f.max() != max || f.min() != min {
        return Err(CriterionError::BadExtremes {
            expected_max: max,
            expected_min: min,
        });
    }
    let entries = f.entries();
    // 0-based: last_max = C-1, first_min = D-1
    let last_max = entries.partition_point(|&v| v == max) - 1;
    let first_min = entries.partition_point(|&v| v > min);
    if first_min - last_max <= 2 {
        return Ok(SmoothStep::Fixpoint);
    }
    let mut next = entries.to_vec();
    next[last_max + 1] += 1;
    next[first_min - 1] -= 1;
    Ok(SmoothStep::Step(DegreeSequence::from_entries_unchecked(next)))
}

/// Iterates `smooth_step` to its fixpoint, returning the result and the
/// number of steps taken. The result is the canonical sequence for
/// (f_1, f_last, len, sum).
pub fn smooth_to_canonical(f: &DegreeSequence) -> Result<(DegreeSequence, usize), CriterionError> {
    let (max, min) = (f.max(), f.min());
    let mut current = f.clone();
    let mut steps = 0;
    loop {
        match smooth_step(&current, max, min)? {
            SmoothStep::Fixpoint => return Ok((current, steps)),
            SmoothStep::Step(next) => {
                current = next;
                steps += 1;
            }
        }
    }
}

/// Sufficient condition for every symmetric pair (e, e) with max a, min b
/// and length m to be bipartite graphic: 4mb ≥ (a+b)² - 1.
pub fn symmetric_sufficient(a: u64, b: u64, m: u64) -> Result<bool, CriterionError> {
    if a < b {
        return Err(CriterionError::HypothesisViolation("requires a ≥ b"));
    }
    if m < a {
        return Err(CriterionError::HypothesisViolation("requires m ≥ a"));
    }
    let lhs = 4u128 * m as u128 * b as u128;
    let sum = (a + b) as u128;
    Ok(lhs + 1 >= sum * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: [i64; 7]) -> ClassParams {
        ClassParams::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6]).unwrap()
    }

    fn seq(v: &[u64]) -> DegreeSequence {
        DegreeSequence::from_entries(v.to_vec()).unwrap()
    }

    fn dec(r: i64, s: i64, p: i64, q: i64) -> CanonicalDecomposition {
        CanonicalDecomposition { r, s, p, q }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&params([4, 1, 4, 1, 4, 4, 10])).unwrap(), dec(2, 2, 0, 0));
        assert_eq!(decompose(&params([2, 1, 2, 1, 3, 3, 4])).unwrap(), dec(1, 1, 0, 0));
        assert_eq!(decompose(&params([3, 1, 3, 1, 4, 4, 8])).unwrap(), dec(2, 2, 0, 0));
        assert_eq!(
            decompose(&params([3, 3, 2, 1, 4, 7, 12])),
            Err(CriterionError::DegenerateClass)
        );
        assert!(matches!(
            decompose(&params([2, 1, 2, 1, 3, 3, 3])),
            Err(CriterionError::EmptyClass(_))
        ));
    }

    #[test]
    fn decompose_allows_r_at_least_n() {
        // r = 2 = n here; the count of maximal entries is bounded by m, not n.
        let d = decompose(&params([2, 1, 6, 2, 6, 2, 8])).unwrap();
        assert_eq!(d, dec(2, 1, 0, 0));
    }

    #[test]
    fn canonical_pair_examples() {
        let p = canonical_pair(&params([4, 1, 4, 1, 4, 4, 10])).unwrap();
        assert_eq!(p.left, seq(&[4, 4, 1, 1]));
        assert_eq!(p.right, seq(&[4, 4, 1, 1]));
        let p = canonical_pair(&params([2, 1, 2, 1, 3, 3, 4])).unwrap();
        assert_eq!((p.left, p.right), (seq(&[2, 1, 1]), seq(&[2, 1, 1])));
        let p = canonical_pair(&params([3, 1, 3, 1, 4, 4, 8])).unwrap();
        assert_eq!((p.left, p.right), (seq(&[3, 3, 1, 1]), seq(&[3, 3, 1, 1])));
    }

    #[test]
    fn theorem_main_examples() {
        let r = theorem_main(&params([2, 1, 2, 1, 3, 3, 4]));
        assert_eq!(r.verdict, Verdict::AllGraphic);
        assert_eq!((r.lhs, r.rhs, r.min_term), (Some(4), Some(5), Some(0)));
        assert_eq!(r.min_term_argument, Some(MinTermArgument::RowSlack));

        let r = theorem_main(&params([4, 1, 4, 1, 4, 4, 10]));
        assert_eq!(r.verdict, Verdict::NotAllGraphic);
        assert_eq!((r.lhs, r.rhs), (Some(16), Some(14)));
        assert_eq!(r.min_term_argument, Some(MinTermArgument::Zero));

        let r = theorem_main(&params([3, 3, 2, 1, 4, 7, 12]));
        assert_eq!(r.verdict, Verdict::AllGraphic);
        assert_eq!(r.branch, Some(Branch::DegenerateEqualExtremes));
        assert!(r.lhs.is_none());

        let r = theorem_main(&params([2, 1, 2, 1, 3, 3, 3]));
        assert_eq!(r.verdict, Verdict::VacuousEmptyClass);
        assert!(r.branch.is_none());
    }

    #[test]
    fn min_term_tie_break_is_first_listed() {
        let (arg, v) = min_term(&dec(1, 1, 0, 0), 1, 1);
        assert_eq!((arg, v), (MinTermArgument::RowSlack, 0));
        let (arg, _) = min_term(&dec(5, 5, 0, 0), 1, 1);
        assert_eq!(arg, MinTermArgument::Zero);
        let (arg, v) = min_term(&dec(1, 3, 2, 0), 1, 1);
        assert_eq!((arg, v), (MinTermArgument::RowSlack, -2));
    }

    #[test]
    fn dominates_prefix_examples() {
        assert_eq!(dominates_prefix(&seq(&[3, 2, 2, 1]), &seq(&[3, 3, 1, 1])), Ok(true));
        assert_eq!(dominates_prefix(&seq(&[4, 4, 1, 1]), &seq(&[4, 4, 1, 1])), Ok(true));
        assert_eq!(dominates_prefix(&seq(&[3, 3, 1, 1]), &seq(&[3, 2, 2, 1])), Ok(false));
        assert_eq!(
            dominates_prefix(&seq(&[3, 1]), &seq(&[2, 1, 1])),
            Err(CriterionError::LengthMismatch(2, 3))
        );
    }

    #[test]
    fn smooth_step_examples() {
        assert_eq!(
            smooth_step(&seq(&[3, 2, 2, 1]), 3, 1),
            Ok(SmoothStep::Step(seq(&[3, 3, 1, 1])))
        );
        assert_eq!(smooth_step(&seq(&[3, 2, 1]), 3, 1), Ok(SmoothStep::Fixpoint));
        assert_eq!(
            smooth_step(&seq(&[4, 3, 3, 3, 1]), 4, 1),
            Ok(SmoothStep::Step(seq(&[4, 4, 3, 2, 1])))
        );
        assert!(matches!(
            smooth_step(&seq(&[3, 2, 1]), 4, 1),
            Err(CriterionError::BadExtremes { .. })
        ));
        assert!(smooth_step(&seq(&[2, 2]), 2, 2).is_err());
    }

    #[test]
    fn smooth_to_canonical_examples() {
        assert_eq!(smooth_to_canonical(&seq(&[3, 2, 2, 1])), Ok((seq(&[3, 3, 1, 1]), 1)));
        assert_eq!(smooth_to_canonical(&seq(&[3, 3, 1, 1])), Ok((seq(&[3, 3, 1, 1]), 0)));
        assert_eq!(
            smooth_to_canonical(&seq(&[4, 3, 3, 3, 1])),
            Ok((seq(&[4, 4, 4, 1, 1]), 2))
        );
        assert_eq!(canonical_side(4, 1, 5, 14), seq(&[4, 4, 4, 1, 1]));
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(symmetric_sufficient(2, 1, 3), Ok(true));
        assert_eq!(symmetric_sufficient(4, 1, 4), Ok(false));
        assert_eq!(symmetric_sufficient(3, 2, 5), Ok(true));
        assert!(symmetric_sufficient(0, 1, 3).is_err());
        assert!(symmetric_sufficient(4, 1, 3).is_err());
    }
}
