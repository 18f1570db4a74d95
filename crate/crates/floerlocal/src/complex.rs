//! Free, finitely generated, bigraded chain complexes over `R` or `F2[U,V]`.
//!
//! A complex stores an ordered list of named generators with bigradings and
//! a sparse differential. The differential has bidegree `(-1, -1)`: a
//! nonzero entry `m` from `x` to `y` must satisfy
//!
//! ```text
//! grading(x) + (-1, -1) = grading(y) + grading_shift(m)
//! ```
//!
//! for every monomial `m` of the entry. Together with `∂² = 0` this is what
//! [`BigradedComplex::validate`] checks.

use crate::ring::{Bigrading, Monomial, RingElem, RingTag};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A named generator with its bigrading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub grading: Bigrading,
}

/// The unique monomial that a differential entry from a generator graded
/// `gx` to one graded `gy` may carry, if any: solve
/// `gx + (-1,-1) = gy + shift(U^a V^b)` for non-negative integers `a, b`.
/// In the quotient ring `R` a mixed solution is additionally rejected.
pub fn differential_monomial(gx: &Bigrading, gy: &Bigrading, tag: RingTag) -> Option<Monomial> {
    let two_a = gy.gr_u - gx.gr_u + 1;
    let two_b = gy.gr_v - gx.gr_v + 1;
    if two_a < 0 || two_b < 0 || two_a % 2 != 0 || two_b % 2 != 0 {
        return None;
    }
    let m = Monomial { u: (two_a / 2) as u32, v: (two_b / 2) as u32 };
    if tag == RingTag::R && m.is_mixed() {
        return None;
    }
    Some(m)
}

/// Result of [`BigradedComplex::validate`]: a (possibly empty) list of
/// human-readable violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

/// A free, finitely generated, bigraded chain complex.
#[derive(Debug, Clone)]
pub struct BigradedComplex {
    tag: RingTag,
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
    /// `rows[i][j]` = differential entry from generator `i` to generator `j`;
    /// absent keys are zero, stored entries are nonzero.
    rows: Vec<BTreeMap<usize, RingElem>>,
}

impl PartialEq for BigradedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.gens == other.gens && self.rows == other.rows
    }
}

impl Eq for BigradedComplex {}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_graphic() && c != '#')
}

impl BigradedComplex {
    pub fn new(tag: RingTag) -> Self {
        BigradedComplex { tag, gens: Vec::new(), index: HashMap::new(), rows: Vec::new() }
    }

    pub fn ring_tag(&self) -> RingTag {
        self.tag
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn add_generator(&mut self, name: &str, grading: Bigrading) -> Result<usize> {
        if !valid_name(name) {
            return Err(Error::Invalid(format!("bad generator name {name:?}")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Invalid(format!("duplicate generator name {name:?}")));
        }
        let i = self.gens.len();
        self.gens.push(Generator { name: name.to_string(), grading });
        self.index.insert(name.to_string(), i);
        self.rows.push(BTreeMap::new());
        Ok(i)
    }

    /// Replace the differential entry between two named generators
    /// (a zero element clears it).
    pub fn set_entry(&mut self, from: &str, to: &str, e: RingElem) -> Result<()> {
        if e.tag() != self.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: e.tag() });
        }
        let i = self
            .index_of(from)
            .ok_or_else(|| Error::Invalid(format!("unknown generator {from:?}")))?;
        let j = self
            .index_of(to)
            .ok_or_else(|| Error::Invalid(format!("unknown generator {to:?}")))?;
        if e.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, e);
        }
        Ok(())
    }

    /// Add into the differential entry between two generators by index.
    pub fn add_entry(&mut self, from: usize, to: usize, e: &RingElem) -> Result<()> {
        if e.tag() != self.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: e.tag() });
        }
        if e.is_zero() {
            return Ok(());
        }
        let cur = match self.rows[from].remove(&to) {
            Some(old) => old.add(e)?,
            None => e.clone(),
        };
        if !cur.is_zero() {
            self.rows[from].insert(to, cur);
        }
        Ok(())
    }

    pub fn entry(&self, from: usize, to: usize) -> Option<&RingElem> {
        self.rows[from].get(&to)
    }

    /// The nonzero entries out of generator `from`, in target-index order.
    pub fn row(&self, from: usize) -> impl Iterator<Item = (usize, &RingElem)> {
        self.rows[from].iter().map(|(j, e)| (*j, e))
    }

    /// All nonzero entries as `(from, to, entry)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElem)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, e)| (i, *j, e)))
    }

    /// Check the chain-complex axioms; every violation is reported.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = HashMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            if let Some(prev) = seen.insert(g.name.as_str(), i) {
                violations.push(format!(
                    "generator name {:?} used twice (positions {prev} and {i})",
                    g.name
                ));
            }
        }
        for (i, j, e) in self.entries() {
            let gx = &self.gens[i].grading;
            let gy = &self.gens[j].grading;
            for m in e.terms() {
                let lhs = gx.add(&Bigrading::new(-1, -1));
                let rhs = gy.add(&m.grading_shift());
                if lhs != rhs {
                    violations.push(format!(
                        "entry {m} from {} to {} is not homogeneous: {lhs} != {rhs}",
                        self.gens[i].name, self.gens[j].name
                    ));
                }
            }
        }
        // ∂² = 0 entry by entry.
        for i in 0..self.gens.len() {
            let mut sq: BTreeMap<usize, RingElem> = BTreeMap::new();
            for (j, e1) in self.rows[i].iter() {
                for (k, e2) in self.rows[*j].iter() {
                    let p = e1.mul(e2).expect("same ring");
                    let cur = match sq.remove(k) {
                        Some(old) => old.add(&p).expect("same ring"),
                        None => p,
                    };
                    if !cur.is_zero() {
                        sq.insert(*k, cur);
                    }
                }
            }
            for (k, e) in sq {
                violations.push(format!(
                    "d^2 is nonzero from {} to {}: {e}",
                    self.gens[i].name, self.gens[k].name
                ));
            }
        }
        ValidationReport { violations }
    }

    /// A complex is reduced when no differential entry contains the
    /// monomial `1`.
    pub fn is_reduced(&self) -> bool {
        self.entries().all(|(_, _, e)| !e.contains_unit_term())
    }

    /// Cancel unit differential entries until the complex is reduced. The
    /// result is homotopy equivalent to the input, and deterministic: among
    /// the current unit entries, the lexicographically least
    /// `(from-name, to-name)` pair is cancelled first.
    pub fn reduce(&self) -> BigradedComplex {
        let mut rows = self.rows.clone();
        let mut alive = vec![true; self.gens.len()];
        loop {
            let mut pick: Option<(usize, usize)> = None;
            for (i, row) in rows.iter().enumerate() {
                if !alive[i] {
                    continue;
                }
                for (j, e) in row.iter() {
                    if alive[*j] && e.contains_unit_term() {
                        let key = (&self.gens[i].name, &self.gens[*j].name);
                        let better = match pick {
                            None => true,
                            Some((pi, pj)) => key < (&self.gens[pi].name, &self.gens[pj].name),
                        };
                        if better {
                            pick = Some((i, *j));
                        }
                    }
                }
            }
            let Some((x, y)) = pick else { break };
            // Cancellation: for every other arrow a -> y and x -> b, add the
            // zig-zag correction entry(a,y) * entry(x,b) to the entry a -> b.
            let out_of_x: Vec<(usize, RingElem)> = rows[x]
                .iter()
                .filter(|(b, _)| **b != y && alive[**b])
                .map(|(b, e)| (*b, e.clone()))
                .collect();
            let into_y: Vec<(usize, RingElem)> = (0..rows.len())
                .filter(|a| *a != x && alive[*a])
                .filter_map(|a| rows[a].get(&y).map(|e| (a, e.clone())))
                .collect();
            for (a, e_ay) in &into_y {
                for (b, e_xb) in &out_of_x {
                    let corr = e_ay.mul(e_xb).expect("same ring");
                    if corr.is_zero() {
                        continue;
                    }
                    let cur = match rows[*a].remove(b) {
                        Some(old) => old.add(&corr).expect("same ring"),
                        None => corr,
                    };
                    if !cur.is_zero() {
                        rows[*a].insert(*b, cur);
                    }
                }
            }
            alive[x] = false;
            alive[y] = false;
            for (i, row) in rows.iter_mut().enumerate() {
                if i == x || i == y {
                    row.clear();
                } else {
                    row.remove(&x);
                    row.remove(&y);
                }
            }
        }
        let mut out = BigradedComplex::new(self.tag);
        let mut remap = vec![usize::MAX; self.gens.len()];
        for (i, g) in self.gens.iter().enumerate() {
            if alive[i] {
                remap[i] = out.add_generator(&g.name, g.grading).expect("names stay unique");
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            for (j, e) in row {
                out.rows[remap[i]].insert(remap[*j], e.clone());
            }
        }
        out
    }

    /// Connected-sum tensor product. Generators are pairs named
    /// `<left>.<right>` with added bigradings;
    /// `∂(x⊗y) = ∂x⊗y + x⊗∂y` (no signs over F2).
    pub fn tensor(&self, other: &BigradedComplex) -> Result<BigradedComplex> {
        if self.tag != other.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: other.tag });
        }
        let mut out = BigradedComplex::new(self.tag);
        let n2 = other.num_gens();
        for a in &self.gens {
            for b in &other.gens {
                out.add_generator(&format!("{}.{}", a.name, b.name), a.grading.add(&b.grading))?;
            }
        }
        let pair = |i: usize, j: usize| i * n2 + j;
        for (i, k, e) in self.entries() {
            for j in 0..n2 {
                out.add_entry(pair(i, j), pair(k, j), e)?;
            }
        }
        for (j, l, e) in other.entries() {
            for i in 0..self.num_gens() {
                out.add_entry(pair(i, j), pair(i, l), e)?;
            }
        }
        Ok(out)
    }

    /// Direct sum; generator names must be disjoint (see [`Self::with_prefix`]).
    pub fn direct_sum(&self, other: &BigradedComplex) -> Result<BigradedComplex> {
        if self.tag != other.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: other.tag });
        }
        let mut out = self.clone();
        let shift = self.num_gens();
        for g in &other.gens {
            out.add_generator(&g.name, g.grading)?;
        }
        for (i, j, e) in other.entries() {
            out.rows[i + shift].insert(j + shift, e.clone());
        }
        Ok(out)
    }

    /// The same complex with every generator renamed to `<prefix><name>`.
    pub fn with_prefix(&self, prefix: &str) -> BigradedComplex {
        let mut out = BigradedComplex::new(self.tag);
        for g in &self.gens {
            out.add_generator(&format!("{prefix}{}", g.name), g.grading)
                .expect("prefixing preserves uniqueness");
        }
        out.rows = self.rows.clone();
        out
    }

    /// Whether the homologies of `C/U` and `C/V`, with their torsion
    /// discarded, are each a single free tower supported in grading zero.
    /// Requires an `R`-complex that already passed [`Self::validate`].
    pub fn is_knot_like(&self) -> Result<bool> {
        if self.tag != RingTag::R {
            return Err(Error::RingMismatch { expected: RingTag::R, got: self.tag });
        }
        let v_ranks = crate::tower::free_ranks(self, crate::tower::Side::V);
        let u_ranks = crate::tower::free_ranks(self, crate::tower::Side::U);
        let single_tower = |ranks: &BTreeMap<i64, usize>| {
            ranks.iter().all(|(d, r)| (*d == 0 && *r == 1) || *r == 0)
                && ranks.get(&0).copied().unwrap_or(0) == 1
        };
        Ok(single_tower(&v_ranks) && single_tower(&u_ranks))
    }

    /// Parse the line-oriented text format:
    ///
    /// ```text
    /// ring R            # or: ring UV
    /// gen x0 0 -2
    /// dif x1 x0 U
    /// ```
    ///
    /// `#` starts a comment; the `ring` line must come first; `dif` lines
    /// may only reference earlier `gen` lines.
    pub fn parse(text: &str) -> Result<BigradedComplex> {
        let mut complex: Option<BigradedComplex> = None;
        let mut seen_pairs: HashMap<(usize, usize), ()> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line: lineno, msg };
            match toks[0] {
                "ring" => {
                    if complex.is_some() {
                        return Err(err("duplicate ring line".into()));
                    }
                    let tag = match toks.get(1) {
                        Some(&"R") => RingTag::R,
                        Some(&"UV") => RingTag::UVPoly,
                        other => {
                            return Err(err(format!("expected ring R or ring UV, got {other:?}")))
                        }
                    };
                    if toks.len() != 2 {
                        return Err(err("trailing tokens after ring line".into()));
                    }
                    complex = Some(BigradedComplex::new(tag));
                }
                "gen" => {
                    let c = complex
                        .as_mut()
                        .ok_or_else(|| err("gen before ring line".into()))?;
                    if toks.len() != 4 {
                        return Err(err(format!("expected gen <name> <gr_u> <gr_v>, got {line:?}")));
                    }
                    let gr_u: i64 = toks[2]
                        .parse()
                        .map_err(|_| err(format!("bad gr_u {:?}", toks[2])))?;
                    let gr_v: i64 = toks[3]
                        .parse()
                        .map_err(|_| err(format!("bad gr_v {:?}", toks[3])))?;
                    c.add_generator(toks[1], Bigrading::new(gr_u, gr_v))
                        .map_err(|e| err(e.to_string()))?;
                }
                "dif" => {
                    let c = complex
                        .as_mut()
                        .ok_or_else(|| err("dif before ring line".into()))?;
                    if toks.len() < 4 {
                        return Err(err(format!("expected dif <from> <to> <elem>, got {line:?}")));
                    }
                    let elem_text: String = toks[3..].concat();
                    let e = RingElem::parse(c.ring_tag(), &elem_text).map_err(|e| match e {
                        // Re-anchor the element parser's error to this line.
                        Error::Parse { msg, .. } => err(msg),
                        other => err(other.to_string()),
                    })?;
                    if e.is_zero() {
                        return Err(err(format!("zero differential entry {elem_text:?}")));
                    }
                    let i = c
                        .index_of(toks[1])
                        .ok_or_else(|| err(format!("unknown generator {:?}", toks[1])))?;
                    let j = c
                        .index_of(toks[2])
                        .ok_or_else(|| err(format!("unknown generator {:?}", toks[2])))?;
                    if seen_pairs.insert((i, j), ()).is_some() {
                        return Err(err(format!(
                            "duplicate dif line for {} -> {}",
                            toks[1], toks[2]
                        )));
                    }
                    c.rows[i].insert(j, e);
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        complex.ok_or(Error::Parse { line: 0, msg: "missing ring line".into() })
    }
}

impl fmt::Display for BigradedComplex {
    /// Canonical print: `ring` line, `gen` lines in generator order, `dif`
    /// lines sorted by `(from-name, to-name)`. Parsing this output
    /// reproduces it bit-exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", self.tag)?;
        for g in &self.gens {
            writeln!(f, "gen {} {} {}", g.name, g.grading.gr_u, g.grading.gr_v)?;
        }
        let mut difs: Vec<(&str, &str, &RingElem)> = self
            .entries()
            .map(|(i, j, e)| (self.gens[i].name.as_str(), self.gens[j].name.as_str(), e))
            .collect();
        difs.sort_by_key(|(from, to, _)| (*from, *to));
        for (from, to, e) in difs {
            writeln!(f, "dif {from} {to} {e}")?;
        }
        Ok(())
    }
}
