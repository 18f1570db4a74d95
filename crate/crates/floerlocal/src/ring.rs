//! The coefficient rings: the polynomial ring `F2[U,V]` and its quotient
//! `R = F2[U,V]/(UV)`.
//!
//! Elements are finite sums of distinct monomials `U^a V^b` (coefficients
//! are F2, so a monomial is either present or absent and addition is
//! symmetric difference). In the quotient every mixed monomial — one with
//! both `a >= 1` and `b >= 1` — is zero, so multiplication drops them.
//!
//! Multiplication by `U` shifts the bigrading by `(-2, 0)` and `V` by
//! `(0, -2)`.

use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// Which coefficient ring an element (or complex) lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    /// `R = F2[U,V]/(UV)`.
    R,
    /// The full polynomial ring `F2[U,V]`.
    UVPoly,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::R => write!(f, "R"),
            RingTag::UVPoly => write!(f, "UV"),
        }
    }
}

/// A monomial `U^u V^v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };

    pub fn u_pow(k: u32) -> Self {
        Monomial { u: k, v: 0 }
    }

    pub fn v_pow(k: u32) -> Self {
        Monomial { u: 0, v: k }
    }

    pub fn is_one(&self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn is_mixed(&self) -> bool {
        self.u > 0 && self.v > 0
    }

    /// Product of monomials (exponents add); the quotient relation is applied
    /// at the [`RingElem`] level, not here.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial { u: self.u + other.u, v: self.v + other.v }
    }

    /// The bigrading shift of multiplication by this monomial.
    pub fn grading_shift(&self) -> Bigrading {
        Bigrading { gr_u: -2 * self.u as i64, gr_v: -2 * self.v as i64 }
    }

    fn parse_token(s: &str) -> Option<Monomial> {
        if s == "1" {
            return Some(Monomial::ONE);
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        let exp_of = |var: u8, i: &mut usize| -> Option<u32> {
            if *i < bytes.len() && bytes[*i] == var {
                *i += 1;
                if *i < bytes.len() && bytes[*i] == b'^' {
                    *i += 1;
                    let start = *i;
                    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    if start == *i {
                        return None; // '^' with no digits
                    }
                    s[start..*i].parse().ok()
                } else {
                    Some(1)
                }
            } else {
                Some(0)
            }
        };
        let u = exp_of(b'U', &mut i)?;
        let v = exp_of(b'V', &mut i)?;
        if i != bytes.len() || (u == 0 && v == 0) {
            return None;
        }
        Some(Monomial { u, v })
    }
}

/// Canonical term order used for printing: higher U-powers first, then the
/// constant, then V-powers in increasing order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.u.cmp(&self.u).then(self.v.cmp(&other.v))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        match self.u {
            0 => {}
            1 => write!(f, "U")?,
            k => write!(f, "U^{k}")?,
        }
        match self.v {
            0 => {}
            1 => write!(f, "V")?,
            k => write!(f, "V^{k}")?,
        }
        Ok(())
    }
}

/// A bigrading `(gr_u, gr_v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigrading {
    pub gr_u: i64,
    pub gr_v: i64,
}

impl Bigrading {
    pub fn new(gr_u: i64, gr_v: i64) -> Self {
        Bigrading { gr_u, gr_v }
    }

    pub fn add(&self, other: &Bigrading) -> Bigrading {
        Bigrading { gr_u: self.gr_u + other.gr_u, gr_v: self.gr_v + other.gr_v }
    }

    /// The Maslov grading convention used throughout: `M = gr_u`.
    pub fn maslov(&self) -> i64 {
        self.gr_u
    }

    /// Alexander grading `A = (gr_u - gr_v) / 2`; requires the gap to be even.
    pub fn alexander(&self) -> Option<i64> {
        let gap = self.gr_u - self.gr_v;
        (gap % 2 == 0).then_some(gap / 2)
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.gr_u, self.gr_v)
    }
}

/// An element of the tagged coefficient ring: an F2-sum of monomials in
/// normal form (mixed monomials removed when the tag is `R`, terms stored
/// sorted and distinct).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElem {
    tag: RingTag,
    terms: BTreeSet<Monomial>,
}

impl RingElem {
    pub fn zero(tag: RingTag) -> Self {
        RingElem { tag, terms: BTreeSet::new() }
    }

    pub fn one(tag: RingTag) -> Self {
        RingElem::from_monomial(tag, Monomial::ONE)
    }

    pub fn from_monomial(tag: RingTag, m: Monomial) -> Self {
        let mut e = RingElem::zero(tag);
        if !(tag == RingTag::R && m.is_mixed()) {
            e.terms.insert(m);
        }
        e
    }

    pub fn tag(&self) -> RingTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The units of both rings are exactly `{1}`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&Monomial::ONE)
    }

    pub fn contains_unit_term(&self) -> bool {
        self.terms.contains(&Monomial::ONE)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// If the element is a single monomial, return it.
    pub fn as_monomial(&self) -> Option<Monomial> {
        (self.terms.len() == 1).then(|| *self.terms.iter().next().unwrap())
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        if self.tag != other.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: other.tag });
        }
        let mut terms = self.terms.clone();
        for m in &other.terms {
            if !terms.remove(m) {
                terms.insert(*m);
            }
        }
        Ok(RingElem { tag: self.tag, terms })
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        if self.tag != other.tag {
            return Err(Error::RingMismatch { expected: self.tag, got: other.tag });
        }
        let mut acc = RingElem::zero(self.tag);
        for a in &self.terms {
            for b in &other.terms {
                let p = a.times(b);
                if self.tag == RingTag::R && p.is_mixed() {
                    continue; // UV = 0 in the quotient
                }
                if !acc.terms.remove(&p) {
                    acc.terms.insert(p);
                }
            }
        }
        Ok(acc)
    }

    pub fn times_monomial(&self, m: &Monomial) -> RingElem {
        let mut acc = RingElem::zero(self.tag);
        for a in &self.terms {
            let p = a.times(m);
            if self.tag == RingTag::R && p.is_mixed() {
                continue;
            }
            if !acc.terms.remove(&p) {
                acc.terms.insert(p);
            }
        }
        acc
    }

    /// Parse from the textual form used by all file formats: monomials
    /// (`1`, `U^k`, `V^k`, `U^aV^b`, with `^1` omissible) joined by `+`.
    pub fn parse(tag: RingTag, s: &str) -> Result<RingElem> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        if s.trim() == "0" {
            return Ok(RingElem::zero(tag));
        }
        let mut acc = RingElem::zero(tag);
        for tok in s.split('+') {
            let tok = tok.trim();
            let m = Monomial::parse_token(tok)
                .ok_or_else(|| bad(format!("bad monomial {tok:?} in ring element {s:?}")))?;
            if tag == RingTag::R && m.is_mixed() {
                return Err(bad(format!("mixed monomial {m} is zero in R; write it as 0 or drop it")));
            }
            acc = acc.add(&RingElem::from_monomial(tag, m))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for m in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{m}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> RingElem {
        RingElem::parse(RingTag::R, s).unwrap()
    }

    fn uv(s: &str) -> RingElem {
        RingElem::parse(RingTag::UVPoly, s).unwrap()
    }

    #[test]
    fn quotient_relation() {
        // U^2 * V = 0 in R, but survives in F2[U,V].
        assert!(r("U^2").mul(&r("V")).unwrap().is_zero());
        assert_eq!(uv("U^2").mul(&uv("V")).unwrap(), uv("U^2V"));
    }

    #[test]
    fn char_two_square() {
        // (U + V)^2 = U^2 + V^2 in R: the cross terms are mixed and the
        // doubled terms cancel over F2.
        let s = r("U+V");
        assert_eq!(s.mul(&s).unwrap(), r("U^2+V^2"));
    }

    #[test]
    fn addition_cancels() {
        let x = r("U^3+V");
        assert!(x.add(&x).unwrap().is_zero());
        assert_eq!(r("1+U").add(&r("U+V")).unwrap(), r("1+V"));
    }

    #[test]
    fn grading_shifts() {
        assert_eq!(Monomial::u_pow(1).grading_shift(), Bigrading::new(-2, 0));
        assert_eq!(Monomial::v_pow(1).grading_shift(), Bigrading::new(0, -2));
        assert_eq!(Monomial { u: 1, v: 1 }.grading_shift(), Bigrading::new(-2, -2));
        assert_eq!(Monomial::u_pow(3).grading_shift(), Bigrading::new(-6, 0));
    }

    #[test]
    fn alexander_parity() {
        assert_eq!(Bigrading::new(0, -2).alexander(), Some(1));
        assert_eq!(Bigrading::new(-1, -1).alexander(), Some(0));
        assert_eq!(Bigrading::new(0, -3).alexander(), None);
        assert_eq!(Bigrading::new(-2, 0).maslov(), -2);
    }

    #[test]
    fn display_roundtrip_forms() {
        for s in ["0", "1", "U", "V", "U^2", "V^3", "U^2+1+V^3", "U+V"] {
            assert_eq!(r(s).to_string(), s);
        }
        assert_eq!(uv("UV").to_string(), "UV");
        assert_eq!(uv("U^2V^3").to_string(), "U^2V^3");
        // exponent 1 written explicitly parses to the same element
        assert_eq!(r("U^1"), r("U"));
        assert_eq!(uv("U^1V^1"), uv("UV"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(RingElem::parse(RingTag::R, "W").is_err());
        assert!(RingElem::parse(RingTag::R, "U^").is_err());
        assert!(RingElem::parse(RingTag::R, "UV").is_err()); // zero in R: must be written 0
        assert!(RingElem::parse(RingTag::R, "VU").is_err()); // order is U then V
        assert!(RingElem::parse(RingTag::R, "").is_err());
    }

    fn arb_relem(tag: RingTag) -> impl Strategy<Value = RingElem> {
        prop::collection::vec((0u32..5, 0u32..5), 0..5).prop_map(move |ms| {
            let mut acc = RingElem::zero(tag);
            for (a, b) in ms {
                acc = acc.add(&RingElem::from_monomial(tag, Monomial { u: a, v: b })).unwrap();
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn ring_axioms_r(a in arb_relem(RingTag::R), b in arb_relem(RingTag::R), c in arb_relem(RingTag::R)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b.mul(&c).unwrap()).unwrap(), a.mul(&b).unwrap().mul(&c).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert!(a.add(&a).unwrap().is_zero());
            prop_assert_eq!(a.mul(&RingElem::one(RingTag::R)).unwrap(), a.clone());
        }

        #[test]
        fn ring_axioms_uv(a in arb_relem(RingTag::UVPoly), b in arb_relem(RingTag::UVPoly), c in arb_relem(RingTag::UVPoly)) {
            prop_assert_eq!(a.mul(&b.mul(&c).unwrap()).unwrap(), a.mul(&b).unwrap().mul(&c).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn shift_additivity(a in 0u32..6, b in 0u32..6, c in 0u32..6, d in 0u32..6) {
            let m1 = Monomial { u: a, v: b };
            let m2 = Monomial { u: c, v: d };
            prop_assert_eq!(
                m1.times(&m2).grading_shift(),
                m1.grading_shift().add(&m2.grading_shift())
            );
        }

        #[test]
        fn text_roundtrip(e in arb_relem(RingTag::R)) {
            let s = e.to_string();
            prop_assert_eq!(RingElem::parse(RingTag::R, &s).unwrap(), e);
        }
    }
}
