//! Local maps and local equivalence of knot-like complexes.
//!
//! A *local map* `f : A → B` is a grading-preserving chain map that induces
//! an isomorphism between the free towers of `H(A/U)` and `H(B/U)`, and
//! likewise on the `V = 0` side. Two knot-like complexes are locally
//! equivalent when local maps exist in both directions.
//!
//! Existence is decidable by linear algebra over F2: grading preservation
//! leaves at most one monomial per ordered generator pair, so chain maps
//! form an F2 vector space cut out by one equation per generator pair, and
//! the tower condition singles out an affine subset of that space.

use crate::complex::BigradedComplex;
use crate::hat::hat_of;
use crate::linalg::{BitMatrix, Poly};
use crate::ring::{Bigrading, Monomial, RingTag};
use crate::standard::{build_standard, ch_closed_form, enumerate_params, StandardParams};
use crate::tower::{side_tower, Side, SideTower};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A grading-preserving chain map, stored as its nonzero matrix entries.
/// Each entry is a single monomial: the gradings of the two generators
/// force it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMap {
    tag: RingTag,
    source_gens: Vec<String>,
    target_gens: Vec<String>,
    entries: BTreeMap<(usize, usize), Monomial>,
}

impl LocalMap {
    pub fn source_gens(&self) -> &[String] {
        &self.source_gens
    }

    pub fn target_gens(&self) -> &[String] {
        &self.target_gens
    }

    /// Nonzero entries as `(source index, target index, monomial)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Monomial)> {
        self.entries.iter().map(|(&(i, j), m)| (i, j, m))
    }

    pub fn entry(&self, source: usize, target: usize) -> Option<&Monomial> {
        self.entries.get(&(source, target))
    }

    /// Compose with a second map (`self` first, then `next`).
    pub fn then(&self, next: &LocalMap) -> Result<LocalMap> {
        if self.tag != next.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: next.tag });
        }
        if self.target_gens != next.source_gens {
            return Err(Error::Invalid("composition: generator lists do not match".into()));
        }
        let mut entries: BTreeMap<(usize, usize), Monomial> = BTreeMap::new();
        for (&(i, k), m1) in &self.entries {
            for (&(k2, j), m2) in &next.entries {
                if k2 != k {
                    continue;
                }
                let prod = m1.times(m2);
                if self.tag == RingTag::R && prod.is_mixed() {
                    continue;
                }
                match entries.remove(&(i, j)) {
                    Some(existing) => debug_assert_eq!(existing, prod),
                    None => {
                        entries.insert((i, j), prod);
                    }
                }
            }
        }
        Ok(LocalMap {
            tag: self.tag,
            source_gens: self.source_gens.clone(),
            target_gens: next.target_gens.clone(),
            entries,
        })
    }
}

impl fmt::Display for LocalMap {
    /// A grid of ring-element texts: rows are source generators, columns
    /// target generators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ns = self.source_gens.len();
        let nt = self.target_gens.len();
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(ns + 1);
        let mut header = vec![String::new()];
        header.extend(self.target_gens.iter().cloned());
        cells.push(header);
        for i in 0..ns {
            let mut row = vec![self.source_gens[i].clone()];
            for j in 0..nt {
                row.push(match self.entries.get(&(i, j)) {
                    Some(m) => m.to_string(),
                    None => "0".to_string(),
                });
            }
            cells.push(row);
        }
        let mut widths = vec![0usize; nt + 1];
        for row in &cells {
            for (c, cell) in row.iter().enumerate() {
                widths[c] = widths[c].max(cell.len());
            }
        }
        for row in &cells {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    line.push_str("  ");
                }
                line.push_str(&format!("{:>width$}", cell, width = widths[c]));
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

/// The unique monomial `m` with `gr(m · to) = gr(from)`, if any.
fn chain_map_monomial(from: &Bigrading, to: &Bigrading, tag: RingTag) -> Option<Monomial> {
    let du = to.gr_u - from.gr_u;
    let dv = to.gr_v - from.gr_v;
    if du < 0 || dv < 0 || du % 2 != 0 || dv % 2 != 0 {
        return None;
    }
    let m = Monomial { u: (du / 2) as u32, v: (dv / 2) as u32 };
    if tag == RingTag::R && m.is_mixed() {
        return None;
    }
    Some(m)
}

fn require_valid(c: &BigradedComplex, role: &str) -> Result<()> {
    let report = c.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::Invalid(format!("{role} complex: {v}")));
    }
    if !c.is_knot_like()? {
        return Err(Error::NotKnotLike(format!("{role} complex is not knot-like")));
    }
    Ok(())
}

struct Towers {
    u: SideTower,
    v: SideTower,
}

fn towers(c: &BigradedComplex) -> Result<Towers> {
    Ok(Towers { u: side_tower(c, Side::U)?, v: side_tower(c, Side::V)? })
}

/// The coefficient with which a map sends the source tower class to the
/// target tower class, on one side. `None` when the image is not a cycle
/// (impossible for chain maps).
fn tower_coefficient(
    vars: &[(usize, usize, Monomial)],
    is_set: &dyn Fn(usize) -> bool,
    src: &SideTower,
    dst: &SideTower,
    side: Side,
) -> Option<Poly> {
    let src_pos: HashMap<usize, usize> =
        src.deg0.iter().enumerate().map(|(p, &g)| (g, p)).collect();
    let dst_pos: HashMap<usize, usize> =
        dst.deg0.iter().enumerate().map(|(p, &g)| (g, p)).collect();
    let mut out = vec![Poly::zero(); dst.deg0.len()];
    for (vi, &(i, j, m)) in vars.iter().enumerate() {
        if !is_set(vi) {
            continue;
        }
        let exp = match side {
            Side::V if m.u == 0 => m.v,
            Side::U if m.v == 0 => m.u,
            _ => continue,
        };
        let (Some(&pg), Some(&ph)) = (src_pos.get(&i), dst_pos.get(&j)) else {
            continue;
        };
        let term = src.tower_gen[pg].mul(&Poly::monomial(exp as usize));
        out[ph] = out[ph].add(&term);
    }
    dst.class_coeff(&out)
}

/// Search for a local map `a → b`. Both complexes must be valid and
/// knot-like. Returns `None` when no local map exists.
pub fn find_local_map(a: &BigradedComplex, b: &BigradedComplex) -> Result<Option<LocalMap>> {
    if a.ring_tag() != b.ring_tag() {
        return Err(Error::RingMismatch { expected: a.ring_tag(), got: b.ring_tag() });
    }
    let tag = a.ring_tag();
    require_valid(a, "source")?;
    require_valid(b, "target")?;
    let ta = towers(a)?;
    let tb = towers(b)?;

    // One F2 unknown per ordered generator pair admitting a
    // grading-preserving monomial.
    let mut vars: Vec<(usize, usize, Monomial)> = Vec::new();
    let mut var_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, g) in a.gens().iter().enumerate() {
        for (j, h) in b.gens().iter().enumerate() {
            if let Some(m) = chain_map_monomial(&g.grading, &h.grading, tag) {
                var_of.insert((i, j), vars.len());
                vars.push((i, j, m));
            }
        }
    }
    if vars.is_empty() {
        return Ok(None);
    }

    // Chain-map condition: the (g, h) entry of d∘f + f∘d vanishes. All
    // nonzero contributions to one entry carry the same forced monomial,
    // so each pair yields a single F2 equation.
    let mut system = BitMatrix::zero(0, vars.len());
    for i in 0..a.num_gens() {
        for j in 0..b.num_gens() {
            let mut row: Vec<usize> = Vec::new();
            let mut toggle = |v: usize| match row.iter().position(|&x| x == v) {
                Some(p) => {
                    row.swap_remove(p);
                }
                None => row.push(v),
            };
            // f first, then the target differential.
            for (vi, &(s, k, m)) in vars.iter().enumerate() {
                if s != i {
                    continue;
                }
                if let Some(e) = b.entry(k, j) {
                    for term in e.terms() {
                        let prod = m.times(term);
                        if tag == RingTag::R && prod.is_mixed() {
                            continue;
                        }
                        toggle(vi);
                    }
                }
            }
            // Source differential first, then f.
            for (k, e) in a.row(i) {
                if let Some(&vi) = var_of.get(&(k, j)) {
                    let m = vars[vi].2;
                    for term in e.terms() {
                        let prod = term.times(&m);
                        if tag == RingTag::R && prod.is_mixed() {
                            continue;
                        }
                        toggle(vi);
                    }
                }
            }
            if !row.is_empty() {
                row.sort_unstable();
                system.push_row(&row);
            }
        }
    }
    let basis = system.kernel_basis();
    let r = basis.nrows();
    if r == 0 {
        return Ok(None);
    }

    // Tower condition: the induced coefficient polynomial must be exactly 1
    // on both sides. Each polynomial coefficient is an F2-linear functional
    // of the chain map, giving an affine system over the solution basis.
    let coeffs = |side: Side, src: &SideTower, dst: &SideTower| -> Vec<Poly> {
        (0..r)
            .map(|bi| {
                tower_coefficient(&vars, &|v| basis.get(bi, v), src, dst, side)
                    .expect("chain maps send the tower cycle to a cycle")
            })
            .collect()
    };
    let pv = coeffs(Side::V, &ta.v, &tb.v);
    let pu = coeffs(Side::U, &ta.u, &tb.u);
    let maxdeg = pv.iter().chain(pu.iter()).filter_map(Poly::degree).max().unwrap_or(0);
    let mut affine = BitMatrix::zero(0, r);
    let mut rhs = Vec::new();
    for polys in [&pv, &pu] {
        for d in 0..=maxdeg {
            let row: Vec<usize> = (0..r).filter(|&i| polys[i].coeff(d)).collect();
            affine.push_row(&row);
            rhs.push(d == 0);
        }
    }
    let lambda = match affine.solve(&rhs) {
        Some(l) => l,
        None => return Ok(None),
    };

    let mut entries = BTreeMap::new();
    for (vi, &(i, j, m)) in vars.iter().enumerate() {
        let mut bit = false;
        for (bi, &l) in lambda.iter().enumerate() {
            if l && basis.get(bi, vi) {
                bit = !bit;
            }
        }
        if bit {
            entries.insert((i, j), m);
        }
    }
    let map = LocalMap {
        tag,
        source_gens: a.gens().iter().map(|g| g.name.clone()).collect(),
        target_gens: b.gens().iter().map(|g| g.name.clone()).collect(),
        entries,
    };
    debug_assert_eq!(is_local_map(&map, a, b), Ok(true));
    Ok(Some(map))
}

/// Check that `f` is a local map from `a` to `b`: grading-preserving,
/// a chain map, and tower coefficient exactly 1 on both sides.
pub fn is_local_map(f: &LocalMap, a: &BigradedComplex, b: &BigradedComplex) -> Result<bool> {
    if a.ring_tag() != b.ring_tag() || f.tag != a.ring_tag() {
        return Err(Error::RingMismatch { expected: a.ring_tag(), got: b.ring_tag() });
    }
    let tag = a.ring_tag();
    let names = |c: &BigradedComplex| -> Vec<String> {
        c.gens().iter().map(|g| g.name.clone()).collect()
    };
    if f.source_gens != names(a) || f.target_gens != names(b) {
        return Err(Error::Invalid("map generator lists do not match the complexes".into()));
    }
    // Grading preservation.
    for (i, j, m) in f.entries() {
        match chain_map_monomial(&a.gens()[i].grading, &b.gens()[j].grading, tag) {
            Some(forced) if forced == *m => {}
            _ => return Ok(false),
        }
    }
    // Chain map: per (source, target) pair the entry of d∘f + f∘d is zero.
    for i in 0..a.num_gens() {
        for j in 0..b.num_gens() {
            let mut count = 0usize;
            for (k, m) in (0..b.num_gens()).filter_map(|k| f.entry(i, k).map(|m| (k, m))) {
                if let Some(e) = b.entry(k, j) {
                    for term in e.terms() {
                        let prod = m.times(term);
                        if tag == RingTag::R && prod.is_mixed() {
                            continue;
                        }
                        count += 1;
                    }
                }
            }
            for (k, e) in a.row(i) {
                if let Some(m) = f.entry(k, j) {
                    for term in e.terms() {
                        let prod = term.times(m);
                        if tag == RingTag::R && prod.is_mixed() {
                            continue;
                        }
                        count += 1;
                    }
                }
            }
            if count % 2 != 0 {
                return Ok(false);
            }
        }
    }
    // Tower coefficients.
    let ta = towers(a)?;
    let tb = towers(b)?;
    let vars: Vec<(usize, usize, Monomial)> = f.entries().map(|(i, j, m)| (i, j, *m)).collect();
    let all = |_: usize| true;
    for (side, src, dst) in [(Side::V, &ta.v, &tb.v), (Side::U, &ta.u, &tb.u)] {
        match tower_coefficient(&vars, &all, src, dst, side) {
            Some(p) if p.is_one() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Local maps in both directions.
pub fn is_locally_equivalent(a: &BigradedComplex, b: &BigradedComplex) -> Result<bool> {
    Ok(find_local_map(a, b)?.is_some() && find_local_map(b, a)?.is_some())
}

/// Search the standard complexes with at most `max_len` parameters, each
/// bounded by `max_abs`, for one locally equivalent to `c`. Symmetric
/// parameter vectors are tried first; the characteristic multi-set of a
/// candidate must embed in that of `c`, which prunes most of the family
/// before any chain-map search.
pub fn standard_representative(
    c: &BigradedComplex,
    max_len: usize,
    max_abs: i64,
) -> Result<Option<StandardParams>> {
    require_valid(c, "input")?;
    let r = c.reduce();
    let ch = hat_of(&r)?.ch_from_basis()?;
    for p in enumerate_params(max_len, max_abs) {
        if !ch.contains(&ch_closed_form(&p)) {
            continue;
        }
        let sc = build_standard(&p);
        if is_locally_equivalent(&r, &sc.complex)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
