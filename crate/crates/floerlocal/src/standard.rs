//! Standard complexes `C(b1, ..., bn)`.
//!
//! The parameters are nonzero integers, evenly many. Odd-index parameters
//! give U-power arrows, even-index parameters V-power arrows, with the
//! direction set by the sign:
//!
//! * `b_i < 0`, `i` odd: `∂_U x_{i-1} = U^{|b_i|} x_i`
//! * `b_i > 0`, `i` odd: `∂_U x_i     = U^{b_i} x_{i-1}`
//! * `b_i < 0`, `i` even: `∂_V x_{i-1} = V^{|b_i|} x_i`
//! * `b_i > 0`, `i` even: `∂_V x_i     = V^{b_i} x_{i-1}`
//!
//! Gradings are forced: `gr_U(x_0) = 0`, and the differential's `(-1,-1)`
//! bidegree propagates gradings along the generator path up to one unknown
//! offset, fixed by `gr_V(x_n) = 0`.

use crate::complex::BigradedComplex;
use crate::hat::CharMultiset;
use crate::ring::{Bigrading, Monomial, RingElem, RingTag};
use crate::{Error, Result};
use std::fmt;

/// Parameters of a standard complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardParams {
    entries: Vec<i64>,
}

impl StandardParams {
    /// Evenly many nonzero entries ([] is the trivial class).
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.len() % 2 != 0 {
            return Err(Error::BadParams(format!("odd length {}", entries.len())));
        }
        if entries.iter().any(|&b| b == 0) {
            return Err(Error::BadParams("zero entry".into()));
        }
        Ok(StandardParams { entries })
    }

    pub fn empty() -> Self {
        StandardParams { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `b_i = -b_{n-i+1}` for all `i`.
    pub fn symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| self.entries[i] == -self.entries[n - 1 - i])
    }

    /// Parse comma-separated signed integers, e.g. `1,-2,2,-1`; an empty
    /// (or all-whitespace) string is the empty parameter list.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut entries = Vec::new();
        for tok in s.split(',') {
            let b: i64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::BadParams(format!("bad entry {tok:?}")))?;
            entries.push(b);
        }
        Self::new(entries)
    }
}

impl fmt::Display for StandardParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
            first = false;
        }
        Ok(())
    }
}

/// A built standard complex together with the parameters it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardComplex {
    pub params: StandardParams,
    pub complex: BigradedComplex,
}

/// The bigradings of `x_0, ..., x_n` for the given parameter entries.
pub(crate) fn standard_gradings(entries: &[i64]) -> Vec<Bigrading> {
    let mut grads = Vec::with_capacity(entries.len() + 1);
    grads.push(Bigrading::new(0, 0));
    for (k, &b) in entries.iter().enumerate() {
        let i = k + 1;
        let prev = *grads.last().unwrap();
        let delta = match (i % 2 == 1, b < 0) {
            (true, true) => Bigrading::new(2 * b.abs() - 1, -1),
            (true, false) => Bigrading::new(1 - 2 * b, 1),
            (false, true) => Bigrading::new(-1, 2 * b.abs() - 1),
            (false, false) => Bigrading::new(1, 1 - 2 * b),
        };
        grads.push(prev.add(&delta));
    }
    let s = -grads.last().unwrap().gr_v;
    for g in &mut grads {
        g.gr_v += s;
    }
    grads
}

/// Build the standard complex `C(b1, ..., bn)`: generators `x0, ..., xn`
/// over `R` with the arrows and gradings described in the module docs.
pub fn build_standard(p: &StandardParams) -> StandardComplex {
    let entries = p.entries();
    let grads = standard_gradings(entries);
    let mut c = BigradedComplex::new(RingTag::R);
    for (i, g) in grads.iter().enumerate() {
        c.add_generator(&format!("x{i}"), *g).expect("distinct names");
    }
    for (k, &b) in entries.iter().enumerate() {
        let i = k + 1;
        let power = b.unsigned_abs() as u32;
        let mono = if i % 2 == 1 { Monomial::u_pow(power) } else { Monomial::v_pow(power) };
        let elem = RingElem::from_monomial(RingTag::R, mono);
        let (from, to) = if b < 0 { (i - 1, i) } else { (i, i - 1) };
        c.set_entry(&format!("x{from}"), &format!("x{to}"), elem).expect("known generators");
    }
    debug_assert!(c.validate().is_valid());
    StandardComplex { params: p.clone(), complex: c }
}

/// `phi_j(p)` = #{odd i : b_i = j} − #{odd i : b_i = −j}.
pub fn phi(p: &StandardParams, j: i64) -> i64 {
    assert!(j >= 1, "phi is defined for positive j");
    let mut count = 0;
    for (k, &b) in p.entries().iter().enumerate() {
        if k % 2 == 0 {
            // 1-based index k+1 is odd
            if b == j {
                count += 1;
            } else if b == -j {
                count -= 1;
            }
        }
    }
    count
}

/// `τ` = Alexander grading of `x_0`; `ε` = sign of `b_1` (0 when empty).
pub fn tau_epsilon_of(p: &StandardParams) -> (i64, i64) {
    let grads = standard_gradings(p.entries());
    let tau = grads[0].alexander().expect("even-length params have integral gradings");
    let epsilon = p.entries().first().map_or(0, |&b| b.signum());
    (tau, epsilon)
}

/// The characteristic multi-set of the standard complex, in closed form:
/// one triple per even-index parameter, of length `|b_i|`, whose target is
/// `x_i` when `b_i < 0` and `x_{i-1}` when `b_i > 0`.
pub fn ch_closed_form(p: &StandardParams) -> CharMultiset {
    let entries = p.entries();
    let grads = standard_gradings(entries);
    let mut ch = CharMultiset::new();
    for (k, &b) in entries.iter().enumerate() {
        let i = k + 1;
        if i % 2 == 0 {
            let target = if b < 0 { i } else { i - 1 };
            let g = &grads[target];
            let a = g.alexander().expect("even-length params have integral gradings");
            ch.insert(a, g.maslov(), b.unsigned_abs() as u32, 1);
        }
    }
    ch
}

fn entry_alphabet(max_abs: i64) -> impl Iterator<Item = i64> + Clone {
    (-max_abs..=max_abs).filter(|&b| b != 0)
}

fn sequences(len: usize, max_abs: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for seq in &out {
            for b in entry_alphabet(max_abs) {
                let mut s = seq.clone();
                s.push(b);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// All symmetric parameter vectors with length ≤ `max_len` (even) and
/// entries in `[-max_abs, max_abs] \ {0}`, ordered by length, then
/// lexicographically; the empty parameter vector comes first.
pub fn enumerate_symmetric(max_len: usize, max_abs: i64) -> Vec<StandardParams> {
    let mut out = vec![StandardParams::empty()];
    let mut n = 2;
    while n <= max_len {
        for half in sequences(n / 2, max_abs) {
            let mut entries = half.clone();
            for i in (0..n / 2).rev() {
                entries.push(-half[i]);
            }
            out.push(StandardParams::new(entries).expect("nonzero, even length"));
        }
        n += 2;
    }
    out
}

/// All parameter vectors within the same bounds, symmetric ones first (in
/// [`enumerate_symmetric`] order), then the rest by length and
/// lexicographic order.
pub fn enumerate_params(max_len: usize, max_abs: i64) -> Vec<StandardParams> {
    let mut out = enumerate_symmetric(max_len, max_abs);
    let mut n = 2;
    while n <= max_len {
        for entries in sequences(n, max_abs) {
            let p = StandardParams::new(entries).expect("nonzero, even length");
            if !p.symmetric() {
                out.push(p);
            }
        }
        n += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hat::hat_of;

    fn params(s: &str) -> StandardParams {
        StandardParams::parse(s).unwrap()
    }

    #[test]
    fn trefoil_gradings_and_arrows() {
        let sc = build_standard(&params("1,-1"));
        let c = &sc.complex;
        let expect = [(0, -2), (-1, -1), (-2, 0)];
        for (i, (u, v)) in expect.iter().enumerate() {
            assert_eq!(c.gens()[i].grading, Bigrading::new(*u, *v));
        }
        assert_eq!(c.entry(1, 0).unwrap().to_string(), "U");
        assert_eq!(c.entry(1, 2).unwrap().to_string(), "V");
        assert_eq!(c.entries().count(), 2);
    }

    #[test]
    fn four_step_gradings() {
        let sc = build_standard(&params("1,-1,1,-1"));
        let got: Vec<Bigrading> = sc.complex.gens().iter().map(|g| g.grading).collect();
        let expect = [(0, -4), (-1, -3), (-2, -2), (-3, -1), (-4, 0)];
        assert_eq!(got, expect.map(|(u, v)| Bigrading::new(u, v)));
    }

    #[test]
    fn empty_params_is_single_generator() {
        let sc = build_standard(&StandardParams::empty());
        assert_eq!(sc.complex.num_gens(), 1);
        assert_eq!(sc.complex.gens()[0].grading, Bigrading::new(0, 0));
        assert_eq!(sc.complex.entries().count(), 0);
    }

    #[test]
    fn phi_examples() {
        let p = params("1,-2,2,-1");
        assert_eq!(phi(&p, 1), 1);
        assert_eq!(phi(&p, 2), 1);
        assert_eq!(phi(&p, 3), 0);
        assert_eq!(phi(&StandardParams::empty(), 5), 0);
        assert_eq!(phi(&params("1,-1"), 1), 1);
        // Negative odd entries count with sign.
        assert_eq!(phi(&params("-2,2"), 2), -1);
    }

    #[test]
    fn tau_epsilon_examples() {
        assert_eq!(tau_epsilon_of(&params("1,-2,2,-1")), (3, 1));
        assert_eq!(tau_epsilon_of(&params("1,-1,1,-1")), (2, 1));
        assert_eq!(tau_epsilon_of(&StandardParams::empty()), (0, 0));
        assert_eq!(tau_epsilon_of(&params("-1,1")), (-1, -1));
    }

    #[test]
    fn ch_closed_form_examples() {
        assert_eq!(
            ch_closed_form(&params("1,-1")),
            CharMultiset::from_triples([(-1, -2, 1)])
        );
        assert!(ch_closed_form(&StandardParams::empty()).is_empty());
        for n in 1..=5i64 {
            let p = StandardParams::new(vec![1, -n, n, -1]).unwrap();
            let expect = CharMultiset::from_triples([(0, -2, n as u32), (-n - 1, -2 * n - 2, 1)]);
            assert_eq!(ch_closed_form(&p), expect, "n = {n}");
        }
    }

    #[test]
    fn closed_form_matches_hat_computations() {
        for p in enumerate_params(4, 2) {
            let sc = build_standard(&p);
            let f = hat_of(&sc.complex).unwrap();
            let ch = ch_closed_form(&p);
            assert_eq!(f.ch_from_basis().unwrap(), ch, "params {p}");
            assert_eq!(f.ch_from_definition(), ch, "params {p}");
        }
    }

    #[test]
    fn standard_complexes_are_knot_like() {
        for p in enumerate_symmetric(6, 3) {
            let sc = build_standard(&p);
            assert!(sc.complex.validate().is_valid(), "params {p}");
            assert!(sc.complex.is_knot_like().unwrap(), "params {p}");
        }
    }

    #[test]
    fn symmetric_params_have_symmetric_gradings() {
        for p in enumerate_symmetric(6, 2) {
            let grads = standard_gradings(p.entries());
            let mut pairs: Vec<(i64, i64)> = grads
                .iter()
                .map(|g| (g.alexander().unwrap(), g.maslov()))
                .collect();
            let mut flipped: Vec<(i64, i64)> =
                pairs.iter().map(|&(a, m)| (-a, m - 2 * a)).collect();
            pairs.sort();
            flipped.sort();
            assert_eq!(pairs, flipped, "params {p}");
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(params("1,-2,2,-1").to_string(), "1,-2,2,-1");
        assert_eq!(params(" 1 , -2 , 2 , -1 ").to_string(), "1,-2,2,-1");
        assert_eq!(params(""), StandardParams::empty());
        assert_eq!(StandardParams::empty().to_string(), "");
        assert!(StandardParams::parse("1,0,0,-1").is_err());
        assert!(StandardParams::parse("1,-1,1").is_err());
        assert!(StandardParams::parse("1,x").is_err());
    }

    #[test]
    fn symmetry_predicate() {
        assert!(params("1,-2,2,-1").symmetric());
        assert!(params("").symmetric());
        assert!(!params("1,-2").symmetric());
        assert!(!params("1,-2,1,-1").symmetric());
        assert!(!params("1,-1,-1,1").symmetric());
        assert!(params("1,-1,-1,1,1,-1").symmetric());
        assert!(params("-2,1,-1,2").symmetric());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let sym = enumerate_symmetric(4, 1);
        let as_vecs: Vec<Vec<i64>> = sym.iter().map(|p| p.entries().to_vec()).collect();
        assert_eq!(
            as_vecs,
            vec![
                vec![],
                vec![-1, 1],
                vec![1, -1],
                vec![-1, -1, 1, 1],
                vec![-1, 1, -1, 1],
                vec![1, -1, 1, -1],
                vec![1, 1, -1, -1],
            ]
        );
        let all = enumerate_params(4, 1);
        // 1 empty + 2 + 4 of length 2 + 4 + 16 of length 4, without double
        // counting the 2 + 4 symmetric ones.
        assert_eq!(all.len(), 1 + 4 + 16);
        let n_sym = all.iter().filter(|p| p.symmetric()).count();
        assert_eq!(n_sym, sym.len());
        // Symmetric block comes first.
        assert!(all[..n_sym].iter().all(|p| p.symmetric()));
    }
}
