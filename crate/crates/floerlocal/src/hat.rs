//! The hat flavor: set `U = 0`, `V = 1` in a reduced `R`-complex to get a
//! Z-graded (Maslov `M`), Z-filtered (Alexander `A`) complex over `F2`,
//! then read off characteristic multi-sets two independent ways:
//!
//! * [`FilteredComplex::ch_from_basis`] — filtered Gaussian elimination to a
//!   vertically simplified basis, recording each arrow's target grading and
//!   length;
//! * [`FilteredComplex::ch_from_definition`] — kernel dimensions of the maps
//!   induced on homology by inclusions of filtration subquotients.
//!
//! Their agreement is one of the main cross-checks of the crate.

use crate::complex::BigradedComplex;
use crate::linalg::BitMatrix;
use crate::ring::RingTag;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// A generator of a filtered complex: Maslov grading and Alexander level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredGen {
    pub name: String,
    pub maslov: i64,
    pub alexander: i64,
}

/// A Z-filtered, Z-graded complex over `F2`. Every arrow drops `M` by
/// exactly 1 and never raises `A`; its *length* is the `A`-drop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    gens: Vec<FilteredGen>,
    index: HashMap<String, usize>,
    arrows: BTreeSet<(usize, usize)>,
}

impl Default for FilteredComplex {
    fn default() -> Self {
        Self::new()
    }
}

/// Result of vertical simplification: the arrow multiset (by target grading
/// and length) and the generators left without arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalBasis {
    /// Sorted triples `(target_A, target_M, length)`, one per arrow pair.
    pub arrows: Vec<(i64, i64, u32)>,
    /// Names of the generators not touched by any arrow, in input order.
    pub cycles: Vec<String>,
}

/// A characteristic multi-set: multiplicities of triples `(a, m, l)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharMultiset {
    counts: BTreeMap<(i64, i64, u32), usize>,
}

impl CharMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples<I: IntoIterator<Item = (i64, i64, u32)>>(triples: I) -> Self {
        let mut out = Self::new();
        for (a, m, l) in triples {
            out.insert(a, m, l, 1);
        }
        out
    }

    pub fn insert(&mut self, a: i64, m: i64, l: u32, mult: usize) {
        if mult > 0 {
            *self.counts.entry((a, m, l)).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, a: i64, m: i64, l: u32) -> usize {
        self.counts.get(&(a, m, l)).copied().unwrap_or(0)
    }

    /// Iterate `((a, m, l), multiplicity)` in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64, u32), usize)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }

    /// Number of triples counted with multiplicity.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Disjoint union: multiplicities add.
    pub fn union(&self, other: &CharMultiset) -> CharMultiset {
        let mut out = self.clone();
        for ((a, m, l), mult) in other.iter() {
            out.insert(a, m, l, mult);
        }
        out
    }

    /// Multi-set containment: every triple of `other` occurs here with at
    /// least the same multiplicity.
    pub fn contains(&self, other: &CharMultiset) -> bool {
        other.iter().all(|((a, m, l), mult)| self.multiplicity(a, m, l) >= mult)
    }
}

impl fmt::Display for CharMultiset {
    /// One line `ch <a> <m> <l> <multiplicity>` per triple, sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((a, m, l), mult) in self.iter() {
            writeln!(f, "ch {a} {m} {l} {mult}")?;
        }
        Ok(())
    }
}

impl FilteredComplex {
    pub fn new() -> Self {
        FilteredComplex { gens: Vec::new(), index: HashMap::new(), arrows: BTreeSet::new() }
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[FilteredGen] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Arrows as `(from, to)` generator indices, in sorted order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows.iter().copied()
    }

    pub fn add_generator(&mut self, name: &str, maslov: i64, alexander: i64) -> Result<usize> {
        if name.is_empty() || name.chars().any(|c| !c.is_ascii_graphic() || c == '#') {
            return Err(Error::Invalid(format!("bad generator name {name:?}")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Invalid(format!("duplicate generator name {name:?}")));
        }
        let i = self.gens.len();
        self.gens.push(FilteredGen { name: name.to_string(), maslov, alexander });
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    pub fn add_arrow(&mut self, from: &str, to: &str) -> Result<()> {
        let i = self
            .index_of(from)
            .ok_or_else(|| Error::Invalid(format!("unknown generator {from:?}")))?;
        let j = self
            .index_of(to)
            .ok_or_else(|| Error::Invalid(format!("unknown generator {to:?}")))?;
        if self.gens[i].maslov - 1 != self.gens[j].maslov {
            return Err(Error::Invalid(format!(
                "arrow {from} -> {to} does not drop the Maslov grading by 1"
            )));
        }
        if self.gens[i].alexander < self.gens[j].alexander {
            return Err(Error::Invalid(format!(
                "arrow {from} -> {to} raises the Alexander filtration"
            )));
        }
        if !self.arrows.insert((i, j)) {
            return Err(Error::Invalid(format!("duplicate arrow {from} -> {to}")));
        }
        Ok(())
    }

    fn length(&self, from: usize, to: usize) -> u32 {
        (self.gens[from].alexander - self.gens[to].alexander) as u32
    }

    /// `∂² = 0` over `F2`: every two-step path count is even.
    fn check_d2(&self) -> Result<()> {
        let mut row: Vec<Vec<usize>> = vec![Vec::new(); self.gens.len()];
        for &(i, j) in &self.arrows {
            row[i].push(j);
        }
        for w in 0..self.gens.len() {
            let mut acc: BTreeSet<usize> = BTreeSet::new();
            for &t in &row[w] {
                for &s in &row[t] {
                    if !acc.insert(s) {
                        acc.remove(&s);
                    }
                }
            }
            if let Some(&s) = acc.iter().next() {
                return Err(Error::Invalid(format!(
                    "d^2 is nonzero from {} to {}",
                    self.gens[w].name, self.gens[s].name
                )));
            }
        }
        Ok(())
    }

    /// Filtered Gaussian elimination to a vertically simplified basis.
    ///
    /// Arrows are processed shortest first (ties broken by target name, then
    /// source name). The selected arrow `∂x = y` is isolated by the basis
    /// changes `x' ↦ x' + x` for every other source `x'` of `y`, and
    /// `y ↦ y + z` for every other target `z` of `x`; minimality of the
    /// selected length makes both changes filtration-legal. With `∂² = 0`
    /// the isolated pair is never touched again.
    pub fn vertically_simplify(&self) -> Result<VerticalBasis> {
        self.check_d2()?;
        let n = self.gens.len();
        let mut row: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(i, j) in &self.arrows {
            row[i].insert(j);
            col[j].insert(i);
        }
        fn toggle(row: &mut [BTreeSet<usize>], col: &mut [BTreeSet<usize>], f: usize, t: usize) {
            if !row[f].insert(t) {
                row[f].remove(&t);
            }
            if !col[t].insert(f) {
                col[t].remove(&f);
            }
        }
        let mut locked = vec![false; n];
        let mut out = Vec::new();
        loop {
            let mut best: Option<(u32, &str, &str, usize, usize)> = None;
            for x in (0..n).filter(|&x| !locked[x]) {
                for &y in &row[x] {
                    let key =
                        (self.length(x, y), self.gens[y].name.as_str(), self.gens[x].name.as_str());
                    if best.map_or(true, |(l, tn, sn, _, _)| key < (l, tn, sn)) {
                        best = Some((key.0, key.1, key.2, x, y));
                    }
                }
            }
            let Some((len, _, _, x, y)) = best else { break };
            for x2 in col[y].clone() {
                if x2 == x {
                    continue;
                }
                for t in row[x].clone() {
                    toggle(&mut row, &mut col, x2, t);
                }
                for s in col[x2].clone() {
                    toggle(&mut row, &mut col, s, x);
                }
            }
            for z in row[x].clone() {
                if z == y {
                    continue;
                }
                for t in row[z].clone() {
                    toggle(&mut row, &mut col, y, t);
                }
                for s in col[y].clone() {
                    toggle(&mut row, &mut col, s, z);
                }
            }
            debug_assert_eq!(row[x], BTreeSet::from([y]));
            debug_assert_eq!(col[y], BTreeSet::from([x]));
            debug_assert!(col[x].is_empty() && row[y].is_empty());
            locked[x] = true;
            locked[y] = true;
            row[x].clear();
            col[y].clear();
            out.push((self.gens[y].alexander, self.gens[y].maslov, len));
        }
        out.sort();
        let cycles = (0..n)
            .filter(|&i| !locked[i])
            .map(|i| self.gens[i].name.clone())
            .collect();
        Ok(VerticalBasis { arrows: out, cycles })
    }

    /// Homology dimension per Maslov grading, filtration ignored; degrees
    /// with zero homology are omitted.
    pub fn total_homology(&self) -> BTreeMap<i64, usize> {
        let mut by_m: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            by_m.entry(g.maslov).or_default().push(i);
        }
        let rank_out = |m: i64| -> usize {
            let (Some(src), Some(tgt)) = (by_m.get(&m), by_m.get(&(m - 1))) else { return 0 };
            let pos: HashMap<usize, usize> =
                tgt.iter().enumerate().map(|(c, &g)| (g, c)).collect();
            let mut mat = BitMatrix::zero(0, tgt.len());
            for &g in src {
                let bits: Vec<usize> = self
                    .arrows
                    .iter()
                    .filter(|&&(f, _)| f == g)
                    .map(|&(_, t)| pos[&t])
                    .collect();
                mat.push_row(&bits);
            }
            mat.rank()
        };
        let mut out = BTreeMap::new();
        for (&m, gens_m) in &by_m {
            let dim = gens_m.len().saturating_sub(rank_out(m)).saturating_sub(rank_out(m + 1));
            if dim > 0 {
                out.insert(m, dim);
            }
        }
        out
    }

    /// The characteristic multi-set read off a vertically simplified basis:
    /// one triple `(A(target), M(target), length)` per arrow of positive
    /// length. Requires the total homology to be one-dimensional.
    pub fn ch_from_basis(&self) -> Result<CharMultiset> {
        let h: usize = self.total_homology().values().sum();
        if h != 1 {
            return Err(Error::HomologyRankNotOne(h));
        }
        let basis = self.vertically_simplify()?;
        Ok(CharMultiset::from_triples(
            basis.arrows.iter().filter(|&&(_, _, l)| l > 0).copied(),
        ))
    }

    /// The characteristic multi-set from its definition: the multiplicity of
    /// `(a, m, l)` is `dim ker ι(a,m,l)* − dim ker ι(a,m,l−1)*`, where
    /// `ι(a,m,l)*` is induced on degree-`m` homology by the inclusion
    /// `F_a/F_{a−1} → F_{a+l}/F_{a−1}` of filtration subquotients.
    pub fn ch_from_definition(&self) -> CharMultiset {
        let mut out = CharMultiset::new();
        if self.gens.is_empty() {
            return out;
        }
        let max_a = self.gens.iter().map(|g| g.alexander).max().unwrap();
        let occupied: BTreeSet<(i64, i64)> =
            self.gens.iter().map(|g| (g.alexander, g.maslov)).collect();
        for &(a, m) in &occupied {
            let mut prev = 0usize;
            for l in 1..=(max_a - a).max(0) as u32 {
                let cur = self.iota_kernel_dim(a, m, l);
                out.insert(a, m, l, cur.saturating_sub(prev));
                prev = cur;
            }
        }
        out
    }

    /// `dim ker ι(a,m,l)*` = dim(Z ∩ ∂ Q(a,l)_{m+1}) − dim B₀, where
    /// `Q(a,l)` is the subquotient spanned by `a ≤ A ≤ a+l`, `Z` the cycles
    /// of `Q(a,0)` in degree `m`, and `B₀` its boundaries from degree `m+1`.
    fn iota_kernel_dim(&self, a: i64, m: i64, l: u32) -> usize {
        let in_q = |g: &FilteredGen| g.alexander >= a && g.alexander <= a + l as i64;
        let cols: Vec<usize> = (0..self.gens.len())
            .filter(|&i| in_q(&self.gens[i]) && self.gens[i].maslov == m)
            .collect();
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(c, &g)| (g, c)).collect();
        let row_of = |src: usize, restrict_a: bool| -> Vec<usize> {
            self.arrows
                .iter()
                .filter(|&&(f, t)| {
                    f == src
                        && pos.contains_key(&t)
                        && (!restrict_a || self.gens[t].alexander == a)
                })
                .map(|&(_, t)| pos[&t])
                .collect()
        };
        // Image of the degree-(m+1) part of Q(a,l).
        let mut s_mat = BitMatrix::zero(0, cols.len());
        for i in 0..self.gens.len() {
            if in_q(&self.gens[i]) && self.gens[i].maslov == m + 1 {
                s_mat.push_row(&row_of(i, false));
            }
        }
        // Cycles of the level-a quotient in degree m: kernel of its
        // (length-zero) differential into degree m-1 at the same level.
        let q0_m: Vec<usize> =
            cols.iter().copied().filter(|&g| self.gens[g].alexander == a).collect();
        let below: Vec<usize> = (0..self.gens.len())
            .filter(|&g| self.gens[g].alexander == a && self.gens[g].maslov == m - 1)
            .collect();
        let src_pos: HashMap<usize, usize> =
            q0_m.iter().enumerate().map(|(c, &g)| (g, c)).collect();
        // Rows indexed by targets, columns by sources, so the right kernel
        // lives in source coordinates.
        let mut d0 = BitMatrix::zero(0, q0_m.len());
        for &t in &below {
            let bits: Vec<usize> = self
                .arrows
                .iter()
                .filter(|&&(f, tt)| tt == t && src_pos.contains_key(&f))
                .map(|&(f, _)| src_pos[&f])
                .collect();
            d0.push_row(&bits);
        }
        let kernel = d0.kernel_basis();
        let mut z_mat = BitMatrix::zero(0, cols.len());
        for r in 0..kernel.nrows() {
            let bits: Vec<usize> = (0..q0_m.len())
                .filter(|&k| kernel.get(r, k))
                .map(|k| pos[&q0_m[k]])
                .collect();
            z_mat.push_row(&bits);
        }
        // Boundaries of the level-a quotient in degree m.
        let mut b0 = BitMatrix::zero(0, cols.len());
        for i in 0..self.gens.len() {
            if self.gens[i].alexander == a && self.gens[i].maslov == m + 1 {
                b0.push_row(&row_of(i, true));
            }
        }
        let zs = z_mat.row_space_intersection_dim(&s_mat);
        zs.saturating_sub(b0.rank())
    }

    /// Parse the `fgen <name> <M> <A>` / `farr <from> <to>` format.
    pub fn parse(text: &str) -> Result<FilteredComplex> {
        let mut f = FilteredComplex::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line: lineno, msg };
            match toks[0] {
                "fgen" => {
                    if toks.len() != 4 {
                        return Err(err(format!("expected fgen <name> <M> <A>, got {line:?}")));
                    }
                    let m: i64 =
                        toks[2].parse().map_err(|_| err(format!("bad M {:?}", toks[2])))?;
                    let a: i64 =
                        toks[3].parse().map_err(|_| err(format!("bad A {:?}", toks[3])))?;
                    f.add_generator(toks[1], m, a).map_err(|e| err(e.to_string()))?;
                }
                "farr" => {
                    if toks.len() != 3 {
                        return Err(err(format!("expected farr <from> <to>, got {line:?}")));
                    }
                    f.add_arrow(toks[1], toks[2]).map_err(|e| err(e.to_string()))?;
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        Ok(f)
    }
}

impl fmt::Display for FilteredComplex {
    /// Canonical print: `fgen` lines in generator order, then `farr` lines
    /// sorted by `(from-name, to-name)`; round-trips bit-exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gens {
            writeln!(f, "fgen {} {} {}", g.name, g.maslov, g.alexander)?;
        }
        let mut arrs: Vec<(&str, &str)> = self
            .arrows
            .iter()
            .map(|&(i, j)| (self.gens[i].name.as_str(), self.gens[j].name.as_str()))
            .collect();
        arrs.sort();
        for (from, to) in arrs {
            writeln!(f, "farr {from} {to}")?;
        }
        Ok(())
    }
}

/// Extract the hat-flavor filtered complex from a reduced `R`-complex:
/// `M = gr_u`, `A = (gr_u − gr_v)/2`, and each `V^k` differential entry
/// becomes an arrow of length `k`.
pub fn hat_of(c: &BigradedComplex) -> Result<FilteredComplex> {
    if c.ring_tag() != RingTag::R {
        return Err(Error::RingMismatch { expected: RingTag::R, got: c.ring_tag() });
    }
    for (i, j, e) in c.entries() {
        if e.contains_unit_term() {
            return Err(Error::NotReduced {
                from: c.gens()[i].name.clone(),
                to: c.gens()[j].name.clone(),
            });
        }
    }
    let mut f = FilteredComplex::new();
    for g in c.gens() {
        let a = g
            .grading
            .alexander()
            .ok_or_else(|| Error::OddGradingGap(g.name.clone()))?;
        f.add_generator(&g.name, g.grading.maslov(), a)?;
    }
    for (i, j, e) in c.entries() {
        for mon in e.terms() {
            if mon.u == 0 && mon.v >= 1 {
                f.add_arrow(&c.gens()[i].name, &c.gens()[j].name)?;
            }
        }
    }
    Ok(f)
}
