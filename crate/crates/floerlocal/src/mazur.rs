//! Intersection-point grading tables for the Mazur-pattern satellite hat
//! complexes, and the vertical-arrow claims about them encoded as
//! machine-checkable constraints.
//!
//! The table for parameter `n ≥ 2` has two stacks of `n-1` rows of 16
//! points (`a^i_j` and their mirrors `a^-i_-j`), two end rows of 14 points
//! (`t_j`, `t_-j`), and a central point `c`: `32n - 3` points in all. The
//! mirror of a point with gradings `(A, M)` sits at `(-A, M - 2A)`.
//!
//! The constraints say, class by class, which vertical-arrow lengths may
//! appear in the vertically simplified complex; `check_against` audits any
//! filtered complex against them.

use crate::hat::FilteredComplex;
use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TablePoint {
    pub label: String,
    pub a: i64,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTable {
    n: i64,
    points: Vec<TablePoint>,
}

impl IntersectionTable {
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn points(&self) -> &[TablePoint] {
        &self.points
    }

    pub fn point(&self, label: &str) -> Option<&TablePoint> {
        self.points.iter().find(|p| p.label == label)
    }
}

impl fmt::Display for IntersectionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.points {
            writeln!(f, "fgen {} {} {}", p.label, p.m, p.a)?;
        }
        Ok(())
    }
}

/// `(A, M)` of `a^i_j` for `j = 1..16`.
fn a_row(i: i64) -> [(i64, i64); 16] {
    [
        (i - 1, 2 * i - 3),
        (i - 1, 2 * i - 4),
        (i - 2, 2 * i - 5),
        (i - 2, 2 * i - 4),
        (i - 1, 2 * i - 3),
        (i - 1, 2 * i - 4),
        (i, 2 * i - 3),
        (i, 2 * i - 2),
        (i - 1, -3),
        (i - 1, -2),
        (i, -1),
        (i, -2),
        (i + 1, -1),
        (i + 1, 0),
        (i, -1),
        (i, -2),
    ]
}

/// `(A, M)` of `t_j` for `j = 1..14`.
fn t_row(n: i64) -> [(i64, i64); 14] {
    [
        (n - 1, 2 * n - 3),
        (n - 2, 2 * n - 4),
        (n - 2, -3),
        (n - 1, -2),
        (n - 1, 2 * n - 3),
        (n, 2 * n - 2),
        (n, -1),
        (n - 1, -2),
        (n - 1, -2 * n - 1),
        (n, -2 * n),
        (n, -1),
        (n + 1, 0),
        (n + 1, 1 - 2 * n),
        (n, -2 * n),
    ]
}

fn mirror(a: i64, m: i64) -> (i64, i64) {
    (-a, m - 2 * a)
}

/// All `32n - 3` intersection points with their gradings.
pub fn build_gradings(n: i64) -> Result<IntersectionTable> {
    if n < 2 {
        return Err(Error::BadParams(format!("n = {n} must be at least 2")));
    }
    let mut points = Vec::with_capacity((32 * n - 3) as usize);
    for i in 1..n {
        for (j, &(a, m)) in a_row(i).iter().enumerate() {
            points.push(TablePoint { label: format!("a^{i}_{}", j + 1), a, m });
        }
    }
    for (j, &(a, m)) in t_row(n).iter().enumerate() {
        points.push(TablePoint { label: format!("t_{}", j + 1), a, m });
    }
    points.push(TablePoint { label: "c".into(), a: 0, m: -2 });
    for i in 1..n {
        for (j, &(a, m)) in a_row(i).iter().enumerate() {
            let (a2, m2) = mirror(a, m);
            points.push(TablePoint { label: format!("a^-{i}_-{}", j + 1), a: a2, m: m2 });
        }
    }
    for (j, &(a, m)) in t_row(n).iter().enumerate() {
        let (a2, m2) = mirror(a, m);
        points.push(TablePoint { label: format!("t_-{}", j + 1), a: a2, m: m2 });
    }
    Ok(IntersectionTable { n, points })
}

/// Which end of a vertical arrow a rule talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSide {
    Target,
    Source,
}

impl fmt::Display for RuleSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSide::Target => write!(f, "target"),
            RuleSide::Source => write!(f, "source"),
        }
    }
}

/// One claim about the vertical arrows at a single `(A, M)` class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub side: RuleSide,
    /// When set, no arrow may have this class at the given side at all
    /// (and `lengths`/`exactly` are unused).
    pub absent: bool,
    pub a: i64,
    pub m: i64,
    pub lengths: BTreeSet<u32>,
    /// `(length, count)`: when the class is occupied, exactly `count` of
    /// its arrows have this length.
    pub exactly: Option<(u32, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    rules: Vec<Rule>,
}

impl ConstraintSet {
    pub fn new(rules: Vec<Rule>) -> Self {
        ConstraintSet { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            rules.push(
                parse_rule(line)
                    .map_err(|msg| Error::Parse { line: lineno + 1, msg })?,
            );
        }
        Ok(ConstraintSet { rules })
    }
}

fn parse_side(tok: &str) -> std::result::Result<RuleSide, String> {
    match tok {
        "target" => Ok(RuleSide::Target),
        "source" => Ok(RuleSide::Source),
        other => Err(format!("expected target or source, got {other:?}")),
    }
}

fn parse_int<T: std::str::FromStr>(tok: &str, what: &str) -> std::result::Result<T, String> {
    tok.parse().map_err(|_| format!("bad {what} {tok:?}"))
}

fn parse_rule(line: &str) -> std::result::Result<Rule, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.first() != Some(&"rule") {
        return Err("expected a rule line".into());
    }
    if toks.get(1) == Some(&"absent") {
        if toks.len() != 5 {
            return Err("absent rule takes side, A, M".into());
        }
        return Ok(Rule {
            side: parse_side(toks[2])?,
            absent: true,
            a: parse_int(toks[3], "Alexander grading")?,
            m: parse_int(toks[4], "Maslov grading")?,
            lengths: BTreeSet::new(),
            exactly: None,
        });
    }
    if toks.len() != 5 && toks.len() != 8 {
        return Err("rule takes side, A, M, lengths, and an optional exactly clause".into());
    }
    let side = parse_side(toks[1])?;
    let a = parse_int(toks[2], "Alexander grading")?;
    let m = parse_int(toks[3], "Maslov grading")?;
    let set = toks[4]
        .strip_prefix("lengths={")
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("expected lengths={{...}}, got {:?}", toks[4]))?;
    let mut lengths = BTreeSet::new();
    for part in set.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err("empty length set".into());
        }
        lengths.insert(parse_int(part, "length")?);
    }
    let exactly = if toks.len() == 8 {
        if toks[5] != "exactly" {
            return Err(format!("expected exactly, got {:?}", toks[5]));
        }
        Some((parse_int(toks[6], "length")?, parse_int(toks[7], "count")?))
    } else {
        None
    };
    Ok(Rule { side, absent: false, a, m, lengths, exactly })
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            if r.absent {
                writeln!(f, "rule absent {} {} {}", r.side, r.a, r.m)?;
                continue;
            }
            let lengths: Vec<String> = r.lengths.iter().map(|l| l.to_string()).collect();
            write!(f, "rule {} {} {} lengths={{{}}}", r.side, r.a, r.m, lengths.join(","))?;
            if let Some((len, count)) = r.exactly {
                write!(f, " exactly {len} {count}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The nine claims about the satellite complex at parameter `n`, one rule
/// per clause part.
pub fn lemma33_constraints(n: i64) -> Result<ConstraintSet> {
    if n < 2 {
        return Err(Error::BadParams(format!("n = {n} must be at least 2")));
    }
    let set = |ls: &[i64]| -> BTreeSet<u32> { ls.iter().map(|&l| l as u32).collect() };
    let rule = |side, a, m, ls: &[i64]| Rule {
        side,
        absent: false,
        a,
        m,
        lengths: set(ls),
        exactly: None,
    };
    let absent = |side, a, m| Rule {
        side,
        absent: true,
        a,
        m,
        lengths: BTreeSet::new(),
        exactly: None,
    };
    use RuleSide::{Source, Target};
    let rules = vec![
        // (1) terminals at Alexander grading -n-1 all have length 1.
        rule(Target, -n - 1, -2 * n - 2, &[1]),
        // (2) sources at (n, -1) have length 1 or n, one arrow of length n.
        Rule {
            side: Source,
            absent: false,
            a: n,
            m: -1,
            lengths: set(&[1, n]),
            exactly: Some((n as u32, 1)),
        },
        // (3) both ends at (-n+1, -2n) only carry length-1 arrows.
        rule(Source, -n + 1, -2 * n, &[1]),
        rule(Target, -n + 1, -2 * n, &[1]),
        // (4) nothing starts at (n-2, -3); arrows into it have length 1.
        absent(Source, n - 2, -3),
        rule(Target, n - 2, -3, &[1]),
        // (5) arrows into the central class (0, -2) have length 1 or n;
        //     arrows out of it have length 1.
        rule(Target, 0, -2, &[1, n]),
        rule(Source, 0, -2, &[1]),
        // (6) arrows into (1, -1) have length 1.
        rule(Target, 1, -1, &[1]),
        // (7) nothing starts at (-2, -4); arrows into it have length 1.
        absent(Source, -2, -4),
        rule(Target, -2, -4, &[1]),
        // (8) both ends at (-1, -3) only carry length-1 arrows.
        rule(Source, -1, -3, &[1]),
        rule(Target, -1, -3, &[1]),
        // (9) nothing ends at (2, 0); arrows out of it have length 1.
        absent(Target, 2, 0),
        rule(Source, 2, 0, &[1]),
    ];
    Ok(ConstraintSet { rules })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

/// Audit the positive-length vertical arrows of `f` (after vertical
/// simplification) against a constraint set.
pub fn check_against(f: &FilteredComplex, cs: &ConstraintSet) -> Result<CheckReport> {
    let basis = f.vertically_simplify()?;
    let arrows: Vec<(i64, i64, u32)> =
        basis.arrows.iter().copied().filter(|&(_, _, l)| l > 0).collect();
    Ok(CheckReport { violations: audit_arrows(&arrows, cs) })
}

/// Decide whether an arrow list satisfies a constraint set, without building
/// violation messages.  Agrees with `audit_arrows(..).is_empty()` on every
/// input; used on hot paths where the arrow list is checked millions of times.
pub fn arrows_satisfy(arrows: &[(i64, i64, u32)], cs: &ConstraintSet) -> bool {
    let class_of = |&(a, m, l): &(i64, i64, u32), side: RuleSide| match side {
        RuleSide::Target => (a, m),
        RuleSide::Source => (a + l as i64, m + 1),
    };
    for r in cs.rules() {
        let mut occupied = false;
        let mut hits = 0usize;
        for t in arrows {
            if class_of(t, r.side) != (r.a, r.m) {
                continue;
            }
            if r.absent {
                return false;
            }
            occupied = true;
            if !r.lengths.contains(&t.2) {
                return false;
            }
            if let Some((len, _)) = r.exactly {
                if t.2 == len {
                    hits += 1;
                }
            }
        }
        if let Some((_, count)) = r.exactly {
            if occupied && hits != count {
                return false;
            }
        }
    }
    true
}

/// Audit an explicit list of vertical arrows, each given as
/// `(target Alexander grading, target Maslov grading, length)`, against a
/// constraint set.  All lengths must be positive.  Returns one message per
/// violation; an empty list means the arrows satisfy every rule.
pub fn audit_arrows(arrows: &[(i64, i64, u32)], cs: &ConstraintSet) -> Vec<String> {
    let class_of = |&(a, m, l): &(i64, i64, u32), side: RuleSide| match side {
        RuleSide::Target => (a, m),
        RuleSide::Source => (a + l as i64, m + 1),
    };
    let mut violations = Vec::new();
    for r in cs.rules() {
        let in_class: Vec<u32> = arrows
            .iter()
            .filter(|t| class_of(t, r.side) == (r.a, r.m))
            .map(|&(_, _, l)| l)
            .collect();
        let where_ = format!("{} class ({}, {})", r.side, r.a, r.m);
        if r.absent {
            if !in_class.is_empty() {
                violations.push(format!(
                    "{where_}: {} arrow(s) present but forbidden",
                    in_class.len()
                ));
            }
            continue;
        }
        for &l in &in_class {
            if !r.lengths.contains(&l) {
                let allowed: Vec<String> = r.lengths.iter().map(|x| x.to_string()).collect();
                violations.push(format!(
                    "{where_}: arrow of length {l} not in {{{}}}",
                    allowed.join(",")
                ));
            }
        }
        if let Some((len, count)) = r.exactly {
            if !in_class.is_empty() {
                let got = in_class.iter().filter(|&&l| l == len).count();
                if got != count {
                    violations.push(format!(
                        "{where_}: {got} arrow(s) of length {len}, expected {count}"
                    ));
                }
            }
        }
    }
    violations
}
