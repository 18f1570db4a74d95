//! Realizability obstructions for leading segments of standard parameters,
//! and a brute-force lifting oracle that certifies them at small bounds.
//!
//! A standard complex over `R` that is the local representative of a knot
//! must lift to a bigraded complex over F2[U,V]: the prescribed arrows stay,
//! every other differential touching the distinguished generators is
//! divisible by `UV`, the complex is reduced, and `∂² = 0`. The oracle
//! exhausts all such completions on the prefix generators plus a bounded
//! number of auxiliary generators with bounded exponents; `refuted` means
//! no completion exists within the bounds.

use crate::ring::Bigrading;
use crate::standard::standard_gradings;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;

/// One position of a prefix pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryPattern {
    Exact(i64),
    AnyNeg,
    AnyPos,
}

impl EntryPattern {
    fn matches(self, b: i64) -> bool {
        match self {
            EntryPattern::Exact(e) => b == e,
            EntryPattern::AnyNeg => b < 0,
            EntryPattern::AnyPos => b > 0,
        }
    }
}

impl fmt::Display for EntryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryPattern::Exact(e) => write!(f, "{e}"),
            EntryPattern::AnyNeg => write!(f, "<0"),
            EntryPattern::AnyPos => write!(f, ">0"),
        }
    }
}

/// A pattern for the leading entries of standard parameters. A parameter
/// vector matches when it is at least as long as the pattern and every
/// pattern position accepts the corresponding entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixPattern {
    entries: Vec<EntryPattern>,
}

impl PrefixPattern {
    pub fn new(entries: Vec<EntryPattern>) -> Result<Self> {
        if entries.iter().any(|e| matches!(e, EntryPattern::Exact(0))) {
            return Err(Error::BadParams("zero entry in pattern".into()));
        }
        Ok(PrefixPattern { entries })
    }

    pub fn entries(&self) -> &[EntryPattern] {
        &self.entries
    }

    pub fn matches(&self, prefix: &[i64]) -> bool {
        prefix.len() >= self.entries.len()
            && self.entries.iter().zip(prefix).all(|(p, &b)| p.matches(b))
    }
}

impl fmt::Display for PrefixPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// The battery of obstruction patterns: parameter vectors whose leading
/// entries match any of these are not the local class of any knot.
pub fn obstruction_patterns() -> Vec<PrefixPattern> {
    use EntryPattern::{AnyNeg, AnyPos, Exact};
    let pats = vec![
        vec![Exact(1), Exact(-1), Exact(-1)],
        vec![Exact(1), Exact(-1), Exact(1), Exact(1)],
        vec![Exact(1), AnyNeg, Exact(-1), AnyNeg],
        vec![Exact(1), AnyNeg, Exact(-1), Exact(1), Exact(1)],
        vec![Exact(1), AnyNeg, Exact(1), Exact(1)],
        vec![Exact(1), AnyNeg, Exact(1), Exact(-1), Exact(-1)],
        vec![Exact(1), AnyPos],
    ];
    pats.into_iter()
        .map(|p| PrefixPattern::new(p).expect("static patterns are well formed"))
        .collect()
}

/// True when the prefix matches one of the obstruction patterns.
pub fn not_realizable(prefix: &[i64]) -> bool {
    obstruction_patterns().iter().any(|p| p.matches(prefix))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    Exists,
    Refuted,
}

impl fmt::Display for OracleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleOutcome::Exists => write!(f, "exists"),
            OracleOutcome::Refuted => write!(f, "refuted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub outcome: OracleOutcome,
    /// Number of auxiliary-generator configurations examined.
    pub configurations: u64,
    pub extra_gens: usize,
    pub exp_bound: u32,
}

/// One XOR constraint `c + Σ lin + Σ quad = 0` over F2 coefficients.
#[derive(Debug, Clone)]
struct XorEq {
    c: bool,
    lin: Vec<usize>,
    quad: Vec<(usize, usize)>,
}

enum Reduced {
    Sat,
    Conflict,
    Open(XorEq),
}

fn reduce_eq(eq: &XorEq, assign: &[Option<bool>]) -> Reduced {
    let mut c = eq.c;
    let mut lin: Vec<usize> = Vec::new();
    let toggle_lin = |v: usize, lin: &mut Vec<usize>| match lin.iter().position(|&x| x == v) {
        Some(p) => {
            lin.swap_remove(p);
        }
        None => lin.push(v),
    };
    for &v in &eq.lin {
        match assign[v] {
            Some(true) => c = !c,
            Some(false) => {}
            None => toggle_lin(v, &mut lin),
        }
    }
    let mut quad: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in &eq.quad {
        match (assign[a], assign[b]) {
            (Some(false), _) | (_, Some(false)) => {}
            (Some(true), Some(true)) => c = !c,
            (Some(true), None) => toggle_lin(b, &mut lin),
            (None, Some(true)) => toggle_lin(a, &mut lin),
            (None, None) => quad.push((a, b)),
        }
    }
    if lin.is_empty() && quad.is_empty() {
        return if c { Reduced::Conflict } else { Reduced::Sat };
    }
    Reduced::Open(XorEq { c, lin, quad })
}

/// Backtracking search with unit propagation; branches on the
/// lowest-numbered open variable.
fn satisfiable(eqs: &[XorEq], assign: &mut [Option<bool>]) -> bool {
    let mut trail: Vec<usize> = Vec::new();
    let result = 'outer: loop {
        let mut changed = false;
        let mut branch: Option<usize> = None;
        for eq in eqs {
            match reduce_eq(eq, assign) {
                Reduced::Sat => {}
                Reduced::Conflict => break 'outer false,
                Reduced::Open(r) => {
                    let mut force: Vec<(usize, bool)> = Vec::new();
                    if r.quad.is_empty() && r.lin.len() == 1 {
                        force.push((r.lin[0], r.c));
                    } else if r.c && r.lin.is_empty() && r.quad.len() == 1 {
                        force.push((r.quad[0].0, true));
                        force.push((r.quad[0].1, true));
                    }
                    if force.is_empty() {
                        let m = r
                            .lin
                            .iter()
                            .copied()
                            .chain(r.quad.iter().flat_map(|&(a, b)| [a, b]))
                            .min()
                            .expect("open equation has variables");
                        branch = Some(branch.map_or(m, |b| b.min(m)));
                    } else {
                        for (v, val) in force {
                            assign[v] = Some(val);
                            trail.push(v);
                            changed = true;
                        }
                    }
                }
            }
        }
        if changed {
            continue;
        }
        let Some(v) = branch else {
            break true;
        };
        for val in [false, true] {
            assign[v] = Some(val);
            if satisfiable(eqs, assign) {
                assign[v] = None;
                break 'outer true;
            }
        }
        assign[v] = None;
        break false;
    };
    for v in trail {
        assign[v] = None;
    }
    result
}

fn delta(g: &Bigrading, h: &Bigrading) -> (i64, i64) {
    (h.gr_u - g.gr_u, h.gr_v - g.gr_v)
}

/// The monomial exponents of an arrow `g → h` of bidegree `(-1,-1)`:
/// `gr(h) = gr(g) + (-1 + 2u, -1 + 2v)`.
fn arrow_exponents(g: &Bigrading, h: &Bigrading, bound: u32) -> Option<(u32, u32)> {
    let (du, dv) = delta(g, h);
    let two_u = du + 1;
    let two_v = dv + 1;
    if two_u < 0 || two_v < 0 || two_u % 2 != 0 || two_v % 2 != 0 {
        return None;
    }
    let (u, v) = ((two_u / 2) as u32, (two_v / 2) as u32);
    (u <= bound && v <= bound).then_some((u, v))
}

struct Prefix {
    gradings: Vec<Bigrading>,
    /// Prescribed arrows `(from, to)` with exponents, indices into the
    /// prefix generators.
    arrows: Vec<(usize, usize, u32, u32)>,
}

fn prefix_model(entries: &[i64]) -> Prefix {
    let gradings = standard_gradings(entries);
    let mut arrows = Vec::new();
    for (k, &b) in entries.iter().enumerate() {
        let i = k + 1;
        let power = b.unsigned_abs() as u32;
        let (u, v) = if i % 2 == 1 { (power, 0) } else { (0, power) };
        let (from, to) = if b < 0 { (i - 1, i) } else { (i, i - 1) };
        arrows.push((from, to, u, v));
    }
    Prefix { gradings, arrows }
}

/// Grading offsets reachable by one arrow (in either direction) between an
/// auxiliary generator and a protected one: exponents in `[1, bound]` on
/// both variables.
fn protected_window(bound: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for u in 1..=bound as i64 {
        for v in 1..=bound as i64 {
            out.push((2 * u - 1, 2 * v - 1));
            out.push((1 - 2 * u, 1 - 2 * v));
        }
    }
    out
}

/// Grading offsets reachable by one non-unit arrow between two auxiliary
/// generators.
fn aux_window(bound: u32) -> Vec<(i64, i64)> {
    let mut out = BTreeSet::new();
    for u in 0..=bound as i64 {
        for v in 0..=bound as i64 {
            out.insert((2 * u - 1, 2 * v - 1));
            out.insert((1 - 2 * u, 1 - 2 * v));
        }
    }
    // A unit arrow is banned by reducedness, but both offsets it reaches,
    // (-1,-1) and (1,1), are also reached by UV-divisible arrows in the
    // opposite direction, so the window is unchanged.
    out.into_iter().collect()
}

/// Whether the configuration of auxiliary gradings admits a completion:
/// build the forced-monomial variables and the `∂² = 0` constraints, then
/// decide satisfiability.
fn config_satisfiable(prefix: &Prefix, aux: &[(i64, i64)], bound: u32) -> bool {
    let np = prefix.gradings.len();
    let mut gradings = prefix.gradings.clone();
    for &(gu, gv) in aux {
        gradings.push(Bigrading::new(gu, gv));
    }
    let n = gradings.len();

    // coefficient of the (i, j) arrow: fixed 1, a variable, or zero.
    #[derive(Clone, Copy, PartialEq)]
    enum Coef {
        Zero,
        One,
        Var(usize),
    }
    let mut coef = vec![Coef::Zero; n * n];
    for &(from, to, _, _) in &prefix.arrows {
        coef[from * n + to] = Coef::One;
    }
    let mut nvars = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i == j || coef[i * n + j] == Coef::One {
                continue;
            }
            let Some((u, v)) = arrow_exponents(&gradings[i], &gradings[j], bound) else {
                continue;
            };
            let touches_prefix = i < np || j < np;
            if touches_prefix && (u == 0 || v == 0) {
                continue; // other differentials at prefix generators divide by UV
            }
            if u == 0 && v == 0 {
                continue; // reduced: no unit arrows anywhere
            }
            coef[i * n + j] = Coef::Var(nvars);
            nvars += 1;
        }
    }

    // One constraint per ordered pair (g, h): the (g, h) entry of ∂²
    // vanishes. Every two-step path contributes the same grading-forced
    // monomial, so the constraint is a plain XOR over F2.
    let mut eqs: Vec<XorEq> = Vec::new();
    for g in 0..n {
        for h in 0..n {
            let mut eq = XorEq { c: false, lin: Vec::new(), quad: Vec::new() };
            for k in 0..n {
                if k == g || k == h {
                    continue;
                }
                match (coef[g * n + k], coef[k * n + h]) {
                    (Coef::Zero, _) | (_, Coef::Zero) => {}
                    (Coef::One, Coef::One) => eq.c = !eq.c,
                    (Coef::One, Coef::Var(v)) | (Coef::Var(v), Coef::One) => eq.lin.push(v),
                    (Coef::Var(a), Coef::Var(b)) => eq.quad.push((a, b)),
                }
            }
            if eq.c && eq.lin.is_empty() && eq.quad.is_empty() {
                return false; // forced contradiction, no search needed
            }
            if eq.c || !eq.lin.is_empty() || !eq.quad.is_empty() {
                eqs.push(eq);
            }
        }
    }
    let mut assign = vec![None; nvars];
    satisfiable(&eqs, &mut assign)
}

/// Exhaustively search for a reduced, homogeneous, `∂² = 0` completion
/// over F2[U,V] of the prefix complex, allowing up to `extra_gens`
/// auxiliary generators (at most 2) and monomial exponents up to
/// `exp_bound`.
pub fn lifting_oracle(prefix: &[i64], extra_gens: usize, exp_bound: u32) -> Result<OracleReport> {
    if prefix.is_empty() {
        return Err(Error::BadParams("empty prefix".into()));
    }
    if prefix.iter().any(|&b| b == 0) {
        return Err(Error::BadParams("zero entry".into()));
    }
    if extra_gens > 2 {
        return Err(Error::BadParams(format!(
            "extra_gens = {extra_gens} not supported (maximum 2)"
        )));
    }
    let max_entry = prefix.iter().map(|b| b.unsigned_abs()).max().unwrap() as u32;
    if max_entry > exp_bound {
        return Err(Error::BadParams(format!(
            "exp_bound {exp_bound} is below the largest prefix exponent {max_entry}"
        )));
    }
    let model = prefix_model(prefix);

    // Auxiliary generators only matter when they connect to the prefix
    // part, directly (a UV-divisible arrow to a prefix generator) or
    // through the other auxiliary generator; this bounds their gradings
    // to finite windows.
    let w_prot = protected_window(exp_bound);
    let w_aux = aux_window(exp_bound);
    let mut first_layer: BTreeSet<(i64, i64)> = BTreeSet::new();
    for g in &model.gradings {
        for &(du, dv) in &w_prot {
            first_layer.insert((g.gr_u + du, g.gr_v + dv));
        }
    }
    let first_layer: Vec<(i64, i64)> = first_layer.iter().copied().collect();

    let mut configs: Vec<Vec<(i64, i64)>> = vec![Vec::new()];
    if extra_gens >= 1 {
        for &p in &first_layer {
            configs.push(vec![p]);
        }
    }
    if extra_gens >= 2 {
        let in_first: BTreeSet<(i64, i64)> = first_layer.iter().copied().collect();
        for (i, &p) in first_layer.iter().enumerate() {
            // Both connected to the prefix; unordered pairs, repeats allowed.
            for &q in &first_layer[i..] {
                configs.push(vec![p, q]);
            }
            // Second generator chained through the first.
            for &(du, dv) in &w_aux {
                let q = (p.0 + du, p.1 + dv);
                if !in_first.contains(&q) {
                    configs.push(vec![p, q]);
               }
            }
        }
    }

    let found = configs
        .par_iter()
        .any(|aux| config_satisfiable(&model, aux, exp_bound));
    Ok(OracleReport {
        outcome: if found { OracleOutcome::Exists } else { OracleOutcome::Refuted },
        configurations: configs.len() as u64,
        extra_gens,
        exp_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicate_examples() {
        assert!(not_realizable(&[1, -1, -1]));
        assert!(not_realizable(&[1, -2, -1, -1]));
        assert!(!not_realizable(&[1, -2, 2, -1]));
    }

    #[test]
    fn predicate_per_rule() {
        assert!(not_realizable(&[1, -1, -1, 5])); // rule 1, longer prefix
        assert!(not_realizable(&[1, -1, 1, 1]));
        assert!(not_realizable(&[1, -3, -1, -2]));
        assert!(not_realizable(&[1, -2, -1, 1, 1]));
        assert!(not_realizable(&[1, -2, 1, 1]));
        assert!(not_realizable(&[1, -2, 1, -1, -1]));
        assert!(not_realizable(&[1, 2]));
        assert!(not_realizable(&[1, 1]));
    }

    #[test]
    fn predicate_negative_cases() {
        assert!(!not_realizable(&[1, -1]));
        assert!(!not_realizable(&[]));
        assert!(!not_realizable(&[1]));
        assert!(!not_realizable(&[1, -2, -1])); // too short for rule 3
        assert!(!not_realizable(&[-1, 1]));
        assert!(!not_realizable(&[1, -1, 1, -1]));
        assert!(!not_realizable(&[1, -2, 1, -1, 1])); // rule 6 needs a fifth -1
        assert!(!not_realizable(&[2, -1, -1])); // rules require leading 1
    }

    #[test]
    fn pattern_display() {
        let pats = obstruction_patterns();
        assert_eq!(pats[2].to_string(), "1,<0,-1,<0");
        assert_eq!(pats[6].to_string(), "1,>0");
    }

    #[test]
    fn oracle_accepts_trefoil() {
        let r = lifting_oracle(&[1, -1], 2, 4).unwrap();
        assert_eq!(r.outcome, OracleOutcome::Exists);
        assert!(r.configurations > 1);
    }

    #[test]
    fn oracle_accepts_length_four_staircase() {
        let r = lifting_oracle(&[1, -1, 1, -1], 1, 4).unwrap();
        assert_eq!(r.outcome, OracleOutcome::Exists);
    }

    #[test]
    fn oracle_refutes_rule_one() {
        let r = lifting_oracle(&[1, -1, -1], 2, 4).unwrap();
        assert_eq!(r.outcome, OracleOutcome::Refuted);
    }

    #[test]
    fn oracle_refutes_rule_three_instance() {
        let r = lifting_oracle(&[1, -2, -1, -1], 2, 4).unwrap();
        assert_eq!(r.outcome, OracleOutcome::Refuted);
    }

    #[test]
    fn oracle_refutes_positive_second_entry() {
        for b in 1i64..=2 {
            let r = lifting_oracle(&[1, b], 2, 2 * b.max(1) as u32 + 2).unwrap();
            assert_eq!(r.outcome, OracleOutcome::Refuted, "prefix (1,{b})");
        }
    }

    #[test]
    fn oracle_rejects_bad_input() {
        assert!(lifting_oracle(&[], 1, 4).is_err());
        assert!(lifting_oracle(&[1, 0], 1, 4).is_err());
        assert!(lifting_oracle(&[1, -1], 3, 4).is_err());
        assert!(lifting_oracle(&[1, -3], 1, 2).is_err());
    }

    #[test]
    fn solver_handles_plain_systems() {
        // x0 + x1 = 1, x1 = 1, x0*x1 = 0 → x0 = 0, x1 = 1.
        let eqs = vec![
            XorEq { c: true, lin: vec![0, 1], quad: vec![] },
            XorEq { c: true, lin: vec![1], quad: vec![] },
            XorEq { c: false, lin: vec![], quad: vec![(0, 1)] },
        ];
        assert!(satisfiable(&eqs, &mut vec![None; 2]));
        // x0*x1 = 1 together with x0 + x1 = 1 is contradictory.
        let eqs = vec![
            XorEq { c: true, lin: vec![], quad: vec![(0, 1)] },
            XorEq { c: true, lin: vec![0, 1], quad: vec![] },
        ];
        assert!(!satisfiable(&eqs, &mut vec![None; 2]));
    }
}
