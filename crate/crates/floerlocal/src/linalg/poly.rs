//! Polynomials over F2 in one variable, coefficients packed into `u64`
//! words (bit k of the stream = coefficient of x^k).

use std::fmt;

/// An element of F2[x]. The word vector is kept trimmed: the last word is
/// nonzero unless the polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    /// The monomial x^k.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1u64 << (k % 64);
        Poly { words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut words = vec![0u64; self.words.len().max(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut words = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for bit in 0..64 {
                if a >> bit & 1 == 1 {
                    // shift `other` by 64*i + bit and xor in
                    for (j, &b) in other.words.iter().enumerate() {
                        if b == 0 {
                            continue;
                        }
                        let idx = i + j;
                        words[idx] ^= b << bit;
                        if bit != 0 {
                            words[idx + 1] ^= b >> (64 - bit);
                        }
                    }
                }
            }
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    /// Euclidean division: returns `(q, r)` with `self = q*d + r` and
    /// `deg r < deg d`. Panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            q = q.add(&Poly::monomial(shift));
            r = r.add(&d.mul(&Poly::monomial(shift)));
        }
        (q, r)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if other.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        other.divrem(self).1.is_zero()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..=self.degree().unwrap()).rev() {
            if self.coeff(k) {
                if !first {
                    write!(f, "+")?;
                }
                match k {
                    0 => write!(f, "1")?,
                    1 => write!(f, "x")?,
                    _ => write!(f, "x^{k}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}
