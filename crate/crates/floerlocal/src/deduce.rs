//! Deduction of local classes from vertical-arrow constraint sets.
//!
//! A [`DeductionInput`] packages a constraint set together with externally
//! supplied `tau` and `epsilon` values and enumeration bounds.
//! [`candidates`] returns every symmetric parameter list compatible with all
//! of that data; [`pipeline`] chains such deductions, starting from a base
//! class computed from scratch, and [`phi_matrix`] tabulates the phi
//! invariants of the resulting family and certifies that the table is the
//! identity matrix.

use std::collections::BTreeSet;
use std::fmt;

use crate::localequiv::standard_representative;
use crate::mazur::{arrows_satisfy, lemma33_constraints, ConstraintSet};
use crate::obstruction::obstruction_patterns;
use crate::standard::{build_standard, phi, standard_gradings, StandardParams};
use crate::{Error, Result};

/// Input data for one deduction step.
///
/// `tau` and `epsilon` are taken as given (typically supplied by a satellite
/// formula); they are never recomputed from the constraint set.  `epsilon`
/// must be `-1`, `0`, or `1`, and both bounds must be positive.
#[derive(Debug, Clone)]
pub struct DeductionInput {
    /// Constraints on the vertical arrows of the sought complex.
    pub cs: ConstraintSet,
    /// Required value of the tau invariant.
    pub tau: i64,
    /// Required value of the epsilon invariant (`-1`, `0`, or `1`).
    pub epsilon: i64,
    /// Maximum parameter-list length to enumerate.
    pub max_len: usize,
    /// Maximum absolute value of any parameter entry.
    pub max_abs: i64,
}

impl DeductionInput {
    pub fn new(
        cs: ConstraintSet,
        tau: i64,
        epsilon: i64,
        max_len: usize,
        max_abs: i64,
    ) -> Result<Self> {
        if !matches!(epsilon, -1 | 0 | 1) {
            return Err(Error::BadParams(format!(
                "epsilon must be -1, 0, or 1, got {epsilon}"
            )));
        }
        if max_len == 0 {
            return Err(Error::BadParams("max_len must be positive".into()));
        }
        if max_abs <= 0 {
            return Err(Error::BadParams("max_abs must be positive".into()));
        }
        Ok(DeductionInput { cs, tau, epsilon, max_len, max_abs })
    }
}

/// Vertical arrows of the standard complex on `entries`, as
/// `(target Alexander grading, target Maslov grading, length)` triples.
/// Equals the triple expansion of `standard::ch_closed_form`.
fn closed_form_arrows(entries: &[i64], out: &mut Vec<(i64, i64, u32)>) {
    out.clear();
    let grads = standard_gradings(entries);
    for (k, &b) in entries.iter().enumerate() {
        // 1-based entry index k + 1; even entries carry the vertical arrows.
        if (k + 1) % 2 == 0 {
            let target = if b < 0 { k + 1 } else { k };
            let g = grads[target];
            let a = g.alexander().expect("standard gradings have an even grading gap");
            out.push((a, g.maslov(), b.unsigned_abs() as u32));
        }
    }
}

/// All symmetric parameter lists compatible with a deduction input: the sign
/// of the leading entry is `epsilon`, tau matches, no initial segment is
/// ruled out by the realizability obstructions, and the vertical arrows of
/// the associated standard complex satisfy the constraint set.
pub fn candidates(inp: &DeductionInput) -> BTreeSet<StandardParams> {
    let mut out = BTreeSet::new();
    if inp.epsilon == 0 {
        // Only the empty list has a sign-0 leading entry; it has tau = 0,
        // no arrows, and no initial segments.
        if inp.tau == 0 {
            out.insert(StandardParams::empty());
        }
        return out;
    }
    debug_assert!(matches!(inp.epsilon, -1 | 1), "epsilon out of range");
    let patterns = obstruction_patterns();
    let mut half = Vec::with_capacity(inp.max_len / 2);
    let mut full = Vec::with_capacity(inp.max_len);
    let mut arrows = Vec::with_capacity(inp.max_len / 2);
    for h in 1..=inp.max_len / 2 {
        extend_half(inp, h, &mut half, 0, &patterns, &mut full, &mut arrows, &mut out);
    }
    out
}

/// Depth-first enumeration of symmetric half-sequences of length `h`.  The
/// first `h - 1` entries range freely; the last is solved from the running
/// alternating sum so that tau comes out right (for a symmetric list, tau is
/// the alternating sum `b_1 - b_2 + b_3 - ...` over the first half).
#[allow(clippy::too_many_arguments)]
fn extend_half(
    inp: &DeductionInput,
    h: usize,
    half: &mut Vec<i64>,
    alt: i64,
    patterns: &[crate::obstruction::PrefixPattern],
    full: &mut Vec<i64>,
    arrows: &mut Vec<(i64, i64, u32)>,
    out: &mut BTreeSet<StandardParams>,
) {
    let pos = half.len();
    if pos == h - 1 {
        // Solve the final half entry: tau = alt + sign * b.
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        let b = sign * (inp.tau - alt);
        if b != 0 && b.abs() <= inp.max_abs {
            half.push(b);
            admit_if_compatible(inp, half, patterns, full, arrows, out);
            half.pop();
        }
        return;
    }
    for mag in 1..=inp.max_abs {
        for b in [mag, -mag] {
            if pos == 0 && b.signum() != inp.epsilon {
                continue;
            }
            let delta = if pos % 2 == 0 { b } else { -b };
            half.push(b);
            extend_half(inp, h, half, alt + delta, patterns, full, arrows, out);
            half.pop();
        }
    }
}

/// Apply the remaining filters to a completed half-sequence and record the
/// symmetric parameter list it generates if everything passes.
fn admit_if_compatible(
    inp: &DeductionInput,
    half: &[i64],
    patterns: &[crate::obstruction::PrefixPattern],
    full: &mut Vec<i64>,
    arrows: &mut Vec<(i64, i64, u32)>,
    out: &mut BTreeSet<StandardParams>,
) {
    // The leading-entry sign is only unconstrained here when the first entry
    // was solved rather than enumerated (half length 1).
    if half[0].signum() != inp.epsilon {
        return;
    }
    full.clear();
    full.extend_from_slice(half);
    for &b in half.iter().rev() {
        full.push(-b);
    }
    // A pattern matching any initial segment also matches the whole list, so
    // one pass over the full list covers every prefix.
    if patterns.iter().any(|p| p.matches(full)) {
        return;
    }
    closed_form_arrows(full, arrows);
    if !arrows_satisfy(arrows, &inp.cs) {
        return;
    }
    let p = StandardParams::new(full.clone()).expect("enumerated entries are nonzero");
    debug_assert!(p.symmetric());
    out.insert(p);
}

/// One resolved step of the deduction pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineStep {
    /// Winding parameter of the satellite pattern used at this step.
    pub n: i64,
    /// Tau value supplied to the step.
    pub tau: i64,
    /// Epsilon value supplied to the step.
    pub epsilon: i64,
    /// The unique surviving parameter list.
    pub survivor: StandardParams,
}

/// Run the deduction pipeline for `n_steps` steps and return the deduced
/// local classes, base case first (`n_steps + 1` entries in total).
///
/// The base case is computed, not assumed: the standard representative of
/// the reduced tensor square of the minimal nontrivial class must come out
/// as `1,-1,1,-1`.  Each subsequent step `n` filters symmetric parameter
/// lists against `lemma33_constraints(n)` with `tau = n + 1`, `epsilon = 1`,
/// and bounds `max_len = 8`, `max_abs = n + 2`, and demands a unique
/// survivor.  Any failure aborts with a description of the offending step.
pub fn pipeline(n_steps: usize) -> Result<Vec<StandardParams>> {
    Ok(pipeline_detailed(n_steps)?.into_iter().map(|s| s.survivor).collect())
}

/// As [`pipeline`], but returning the per-step record (inputs and survivor).
pub fn pipeline_detailed(n_steps: usize) -> Result<Vec<PipelineStep>> {
    let minimal = StandardParams::new(vec![1, -1]).expect("valid parameters");
    let c = build_standard(&minimal).complex;
    let square = c.tensor(&c)?.reduce();
    let base = standard_representative(&square, 6, 2)?.ok_or_else(|| {
        Error::Deduction(
            "base case: tensor square has no standard representative within bounds (6, 2)".into(),
        )
    })?;
    let expected = StandardParams::new(vec![1, -1, 1, -1]).expect("valid parameters");
    if base != expected {
        return Err(Error::Deduction(format!(
            "base case: representative {base} of the tensor square differs from {expected}"
        )));
    }
    let mut steps = vec![PipelineStep { n: 1, tau: 2, epsilon: 1, survivor: base }];
    for k in 1..=n_steps {
        let n = (k + 1) as i64;
        let tau = n + 1;
        let cs = lemma33_constraints(n)?;
        let inp = DeductionInput::new(cs, tau, 1, 8, n + 2)?;
        let found = candidates(&inp);
        let mut it = found.iter();
        match (it.next(), it.next()) {
            (Some(p), None) => {
                steps.push(PipelineStep { n, tau, epsilon: 1, survivor: p.clone() });
            }
            (None, _) => {
                return Err(Error::Deduction(format!(
                    "step n={n}: no candidate survives (tau={tau}, epsilon=1, \
                     max_len=8, max_abs={})",
                    n + 2
                )));
            }
            (Some(_), Some(_)) => {
                let all: Vec<String> = found.iter().map(|p| format!("({p})")).collect();
                return Err(Error::Deduction(format!(
                    "step n={n}: deduction is not unique (tau={tau}, epsilon=1, \
                     max_len=8, max_abs={}); survivors: {}",
                    n + 2,
                    all.join(" ")
                )));
            }
        }
    }
    Ok(steps)
}

/// The phi-invariant table of the pipeline family, together with its rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMatrix {
    /// Row `n` (1-based) holds `phi_j` of the `n`-th deduced class for
    /// `j = 2, ..., size + 1`.
    pub rows: Vec<Vec<i64>>,
    /// Rank of the matrix over the rationals.
    pub rank: usize,
}

impl fmt::Display for PhiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        write!(f, "rank={}", self.rank)
    }
}

/// Tabulate `phi_j` (columns `j = 2..=size + 1`) of the pipeline classes
/// beyond the base case (rows `n = 1..=size`) and certify that the table is
/// the `size x size` identity matrix; its rank is then `size`.
pub fn phi_matrix(size: usize) -> Result<PhiMatrix> {
    if size == 0 {
        return Err(Error::BadParams("phi matrix size must be at least 1".into()));
    }
    let classes = pipeline(size)?;
    let mut rows = Vec::with_capacity(size);
    for r in 1..=size {
        let p = &classes[r];
        let row: Vec<i64> = (2..=size as i64 + 1).map(|j| phi(p, j)).collect();
        rows.push(row);
    }
    for (i, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let want = i64::from(i == c);
            if v != want {
                return Err(Error::Deduction(format!(
                    "phi matrix entry at row n={}, column j={} is {v}, expected {want}: \
                     the table is not the identity",
                    i + 1,
                    c + 2
                )));
            }
        }
    }
    Ok(PhiMatrix { rows, rank: size })
}
