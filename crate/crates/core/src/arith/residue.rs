//! Finite residue fields `Fp[u]/(pi)`.
//!
//! Elements are encoded as integers in `0..q`: the base-`p` digits of an
//! element are the coefficients of its canonical representative of degree
//! `< deg pi`, lowest degree first. Zero is `0` and one is `1`.

use std::fmt;

use crate::arith::field::FieldOps;
use crate::error::{Error, Result};

pub type ResidueElem = u64;

/// Largest residue field we are willing to build tables over.
pub const MAX_RESIDUE_FIELD_SIZE: u64 = 1 << 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueField {
    p: u64,
    /// Monic modulus, ascending coefficients; degree `k >= 1`.
    modulus: Vec<u64>,
    q: u64,
}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            write!(f, "F{}", self.p)
        } else {
            write!(f, "F{}[u]/({:?})", self.p, self.modulus)
        }
    }
}

impl ResidueField {
    /// The prime field `Fp`.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_RESIDUE_FIELD_SIZE {
            return Err(Error::Budget(format!(
                "residue field of size {p} is too large"
            )));
        }
        Ok(ResidueField {
            p,
            modulus: vec![0, 1],
            q: p,
        })
    }

    /// `Fp[u]/(modulus)`; the modulus must be monic and irreducible, which the
    /// caller guarantees.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let k = modulus.len() as u32 - 1;
        debug_assert_eq!(modulus.last(), Some(&1));
        let q = p
            .checked_pow(k)
            .filter(|q| *q <= MAX_RESIDUE_FIELD_SIZE)
            .ok_or_else(|| Error::Budget(format!("residue field of size {p}^{k} is too large")))?;
        Ok(ResidueField { p, modulus, q })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> {
        0..self.q
    }

    pub fn decode(&self, mut a: ResidueElem) -> Vec<u64> {
        let mut out = vec![0; self.degree()];
        for c in out.iter_mut() {
            *c = a % self.p;
            a /= self.p;
        }
        out
    }

    pub fn encode(&self, coeffs: &[u64]) -> ResidueElem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + (c % self.p))
    }

    /// Reduces an arbitrary coefficient vector (ascending) modulo the modulus.
    pub fn encode_poly(&self, coeffs: &[u64]) -> ResidueElem {
        let k = self.degree();
        let mut r: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        if r.len() > k {
            for i in (k..r.len()).rev() {
                let c = r[i];
                if c == 0 {
                    continue;
                }
                r[i] = 0;
                // u^i = u^(i-k) * u^k and u^k = -(lower terms of modulus)
                for (j, &m) in self.modulus[..k].iter().enumerate() {
                    let idx = i - k + j;
                    r[idx] = (r[idx] + self.p - (c * m) % self.p) % self.p;
                }
            }
            r.truncate(k);
        }
        self.encode(&r)
    }

    pub fn from_int(&self, n: i64) -> ResidueElem {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.degree() == 1 {
            return ((a as u128 + b as u128) % self.p as u128) as u64;
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    pub fn neg(&self, a: ResidueElem) -> ResidueElem {
        if self.degree() == 1 {
            return (self.p - a) % self.p;
        }
        let s: Vec<u64> = self
            .decode(a)
            .iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.encode(&s)
    }

    pub fn sub(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.degree() == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let mut prod = vec![0u64; x.len() + y.len()];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] =
                    ((prod[i + j] as u128 + *u as u128 * *v as u128) % self.p as u128) as u64;
            }
        }
        self.encode_poly(&prod)
    }

    pub fn pow(&self, a: ResidueElem, mut e: u64) -> ResidueElem {
        let mut base = a;
        let mut acc = 1 % self.q.max(2);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: ResidueElem) -> Option<ResidueElem> {
        (a != 0).then(|| self.pow(a, self.q - 2))
    }

    /// Order of `a` in the cyclic group `k*`, found by factoring `q - 1` and
    /// descending through its divisors. `None` for zero.
    pub fn multiplicative_order(&self, a: ResidueElem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut order = self.q - 1;
        for (prime, _) in factor_u64(self.q - 1) {
            while order.is_multiple_of(prime) && self.pow(a, order / prime) == 1 {
                order /= prime;
            }
        }
        Some(order)
    }

    pub fn format(&self, a: ResidueElem) -> String {
        if self.degree() == 1 {
            return a.to_string();
        }
        let coeffs = self.decode(a);
        crate::arith::fppoly::format_coeffs(&coeffs, "u")
    }
}

impl FieldOps for ResidueField {
    type Elem = ResidueElem;

    fn zero(&self) -> ResidueElem {
        0
    }
    fn one(&self) -> ResidueElem {
        1
    }
    fn from_i64(&self, n: i64) -> ResidueElem {
        self.from_int(n)
    }
    fn is_zero(&self, a: &ResidueElem) -> bool {
        *a == 0
    }
    fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueField::add(self, *a, *b)
    }
    fn sub(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueField::sub(self, *a, *b)
    }
    fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueField::mul(self, *a, *b)
    }
    fn neg(&self, a: &ResidueElem) -> ResidueElem {
        ResidueField::neg(self, *a)
    }
    fn inv(&self, a: &ResidueElem) -> Option<ResidueElem> {
        ResidueField::inv(self, *a)
    }
}

/// Trial-division factorization of a machine integer.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = ResidueField::extension(2, vec![1, 1, 1]).unwrap();
        assert_eq!(f.size(), 4);
        // u * u = u + 1 in F2[u]/(u^2+u+1)
        let u = f.encode(&[0, 1]);
        assert_eq!(f.mul(u, u), f.encode(&[1, 1]));
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.multiplicative_order(u), Some(3));
    }

    #[test]
    fn order_in_prime_field() {
        let f = ResidueField::prime(7).unwrap();
        assert_eq!(f.multiplicative_order(2), Some(3));
        assert_eq!(f.multiplicative_order(3), Some(6));
        assert_eq!(f.multiplicative_order(1), Some(1));
        assert_eq!(f.multiplicative_order(0), None);
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(97), vec![(97, 1)]);
    }
}
