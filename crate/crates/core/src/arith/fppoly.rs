//! Polynomials over `Fp`, the ring `Fp[t]`, and monic irreducibles.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::integers::is_prime_u64;
use crate::arith::places::Place;
use crate::arith::residue::{ResidueElem, ResidueField};
use crate::arith::ring::{EuclideanRing, FactorBudget, GlobalRing};
use crate::error::{Error, Result};

/// A polynomial over `Fp`, coefficients ascending with no trailing zeros.
/// The prime lives in the owning [`FpPolyRing`].
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FpPoly {
    coeffs: Vec<u64>,
}

impl FpPoly {
    /// Builds a polynomial from ascending coefficients, which must already be
    /// reduced modulo `p`.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn zero() -> Self {
        FpPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: u64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `t^n`
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        FpPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Serialized form `c0,c1,...,cn`.
    pub fn to_coeff_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_coeffs(&self.coeffs, "t"))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_coeffs(&self.coeffs, "t"))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pretty-prints ascending coefficients as an expression in `var`,
/// highest degree first.
pub fn format_coeffs(coeffs: &[u64], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}*{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}*{var}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// The polynomial ring `Fp[t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpPolyRing {
    p: u64,
}

impl FpPolyRing {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::Unsupported(format!(
                "characteristic {p} is too large"
            )));
        }
        Ok(FpPolyRing { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The generator `t`.
    pub fn t(&self) -> FpPoly {
        FpPoly::monomial(1)
    }

    /// Reduces arbitrary integer coefficients modulo `p`.
    pub fn poly(&self, coeffs: &[i64]) -> FpPoly {
        FpPoly::from_coeffs(
            coeffs
                .iter()
                .map(|c| c.rem_euclid(self.p as i64) as u64)
                .collect(),
        )
    }

    pub fn scale(&self, a: &FpPoly, c: u64) -> FpPoly {
        FpPoly::from_coeffs(a.coeffs.iter().map(|x| x * c % self.p).collect())
    }

    pub fn inv_mod_p(&self, c: u64) -> u64 {
        debug_assert!(!c.is_multiple_of(self.p));
        let (mut e, mut base, mut acc) = (self.p - 2, c % self.p, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self, a: &FpPoly) -> FpPoly {
        FpPoly::from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % self.p) * c % self.p)
                .collect(),
        )
    }

    /// `base^e mod m`.
    fn pow_mod(&self, base: &FpPoly, mut e: BigUint, m: &FpPoly) -> FpPoly {
        let mut acc = self.div_rem(&FpPoly::constant(1), m).1;
        let mut b = self.div_rem(base, m).1;
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.div_rem(&self.mul(&acc, &b), m).1;
            }
            b = self.div_rem(&self.mul(&b, &b), m).1;
            e >>= 1;
        }
        acc
    }

    /// `t^(p^i) mod m`.
    fn frobenius_power(&self, i: usize, m: &FpPoly) -> FpPoly {
        let e = num_traits::pow(BigUint::from(self.p), i);
        self.pow_mod(&self.t(), e, m)
    }

    /// Rabin-style test: a monic `f` of degree `n >= 1` is irreducible iff it
    /// has no common factor with `t^(p^i) - t` for `i <= n/2`.
    pub fn is_irreducible(&self, f: &FpPoly) -> bool {
        let n = match f.degree() {
            Some(n) if n >= 1 => n,
            _ => return false,
        };
        let t = self.t();
        (1..=n / 2).all(|i| {
            let x = self.sub(&self.frobenius_power(i, f), &t);
            self.gcd(&x, f).degree() == Some(0)
        })
    }

    /// All monic polynomials of degree exactly `n`, ascending.
    pub fn monic_of_degree(&self, n: usize) -> impl Iterator<Item = FpPoly> + '_ {
        let count = self.p.pow(n as u32);
        (0..count).map(move |mut idx| {
            let mut coeffs = vec![0; n + 1];
            for c in coeffs.iter_mut().take(n) {
                *c = idx % self.p;
                idx /= self.p;
            }
            coeffs[n] = 1;
            FpPoly { coeffs }
        })
    }

    /// Monic irreducibles of degree exactly `n`, ascending.
    pub fn irreducibles_of_degree(&self, n: usize) -> impl Iterator<Item = FpPoly> + '_ {
        self.monic_of_degree(n)
            .filter(move |f| self.is_irreducible(f))
    }
}

/// Number of monic irreducible polynomials of degree `n` over `Fp`, via the
/// Moebius inversion formula.
pub fn count_irreducibles(p: u64, n: u64) -> BigUint {
    assert!(n >= 1, "degree must be positive");
    let p = BigInt::from(p);
    let mut total = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        match moebius(n / d) {
            0 => {}
            m => total += BigInt::from(m) * num_traits::pow(p.clone(), d as usize),
        }
    }
    let (q, r) = total.div_rem(&BigInt::from(n));
    debug_assert!(r.is_zero());
    q.to_biguint().expect("count is positive")
}

fn moebius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Default cap on `p^max_degree` for irreducible enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 22;

/// All monic irreducibles of degree `<= max_degree` in (degree, coefficient)
/// order.
pub fn enumerate_monic_irreducibles(p: u64, max_degree: usize, budget: u64) -> Result<Vec<FpPoly>> {
    let ring = FpPolyRing::new(p)?;
    match p.checked_pow(max_degree as u32) {
        Some(n) if n <= budget => {}
        _ => {
            return Err(Error::Budget(format!(
                "{p}^{max_degree} candidates exceed the enumeration budget {budget}"
            )))
        }
    }
    Ok((1..=max_degree)
        .flat_map(|n| ring.irreducibles_of_degree(n).collect::<Vec<_>>())
        .collect())
}

impl EuclideanRing for FpPolyRing {
    type Elem = FpPoly;

    fn zero(&self) -> FpPoly {
        FpPoly::zero()
    }
    fn one(&self) -> FpPoly {
        FpPoly::constant(1)
    }
    fn from_i64(&self, n: i64) -> FpPoly {
        FpPoly::constant(n.rem_euclid(self.p as i64) as u64)
    }
    fn from_bigint(&self, n: &BigInt) -> FpPoly {
        let r = n.mod_floor(&BigInt::from(self.p));
        FpPoly::constant(r.to_u64().unwrap())
    }
    fn is_zero(&self, a: &FpPoly) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &FpPoly) -> bool {
        a.coeffs == [1]
    }
    fn add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        FpPoly::from_coeffs((0..n).map(|i| (a.coeff(i) + b.coeff(i)) % self.p).collect())
    }
    fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        FpPoly::from_coeffs(
            (0..n)
                .map(|i| (a.coeff(i) + self.p - b.coeff(i)) % self.p)
                .collect(),
        )
    }
    fn neg(&self, a: &FpPoly) -> FpPoly {
        FpPoly::from_coeffs(a.coeffs.iter().map(|c| (self.p - c) % self.p).collect())
    }
    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.is_zero() || b.is_zero() {
            return FpPoly::zero();
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p;
            }
        }
        FpPoly::from_coeffs(acc.into_iter().map(|c| c as u64).collect())
    }
    fn div_rem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        let db = b.degree().expect("division by zero polynomial");
        let inv_lead = self.inv_mod_p(b.leading());
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return (FpPoly::zero(), a.clone());
        }
        let mut quot = vec![0u64; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i] * inv_lead % self.p;
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                let idx = i - db + j;
                rem[idx] = (rem[idx] + self.p - c * bj % self.p) % self.p;
            }
        }
        rem.truncate(db);
        (FpPoly::from_coeffs(quot), FpPoly::from_coeffs(rem))
    }
    fn unit_part(&self, a: &FpPoly) -> FpPoly {
        if a.is_zero() {
            self.one()
        } else {
            FpPoly::constant(a.leading())
        }
    }
    fn unit_inverse(&self, u: &FpPoly) -> FpPoly {
        FpPoly::constant(self.inv_mod_p(u.coeff(0)))
    }
    fn is_unit(&self, a: &FpPoly) -> bool {
        a.degree() == Some(0)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn height(&self, a: &FpPoly) -> BigUint {
        BigUint::from(a.degree().unwrap_or(0))
    }
    fn format(&self, a: &FpPoly) -> String {
        format_coeffs(&a.coeffs, "t")
    }
}

impl GlobalRing for FpPolyRing {
    fn field_name(&self) -> String {
        format!("F{}(t)", self.p)
    }

    fn infinity_is_archimedean(&self) -> bool {
        false
    }

    fn is_prime_element(&self, a: &FpPoly) -> bool {
        a.is_monic() && self.is_irreducible(a)
    }

    fn infinite_valuation(&self, a: &FpPoly) -> Option<i64> {
        a.degree().map(|d| -(d as i64))
    }

    fn residue_field(&self, place: &Place<FpPoly>) -> Result<ResidueField> {
        match place {
            Place::Finite(pi) => ResidueField::extension(self.p, pi.coeffs.clone()),
            Place::Infinite => ResidueField::prime(self.p),
        }
    }

    fn residue_field_size(&self, place: &Place<FpPoly>) -> Result<BigUint> {
        let deg = match place {
            Place::Finite(pi) => pi.degree().unwrap_or(0),
            Place::Infinite => 1,
        };
        Ok(num_traits::pow(BigUint::from(self.p), deg))
    }

    fn reduce_finite(&self, a: &FpPoly, field: &ResidueField) -> ResidueElem {
        field.encode_poly(&a.coeffs)
    }

    fn reduce_infinite(&self, a: &FpPoly, k: u64, _field: &ResidueField) -> ResidueElem {
        debug_assert!(a.degree().is_none_or(|d| d as u64 <= k));
        a.coeff(k as usize)
    }

    fn factor(&self, a: &FpPoly, budget: &FactorBudget) -> Result<Vec<(FpPoly, u64)>> {
        if a.is_zero() {
            return Err(Error::Domain("cannot factor zero".into()));
        }
        let mut rest = self.normalize(a);
        let mut primes = Vec::new();
        let mut trials = 0u64;
        let mut i = 1;
        while rest.degree().unwrap_or(0) >= 1 {
            let n = rest.degree().unwrap();
            if 2 * i > n {
                // no factor of degree <= n/2 remains
                primes.push(rest.clone());
                break;
            }
            // product of the distinct irreducible factors of degree i
            let x = self.sub(&self.frobenius_power(i, &rest), &self.t());
            let g = self.gcd(&x, &rest);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                if gd == i {
                    primes.push(g.clone());
                } else {
                    let mut h = g.clone();
                    for cand in self.irreducibles_of_degree(i) {
                        trials += 1;
                        if trials > budget.max_trials {
                            return Err(Error::Budget(format!(
                                "factoring {} exceeded {} candidate divisors",
                                self.format(a),
                                budget.max_trials
                            )));
                        }
                        if let Some(q) = self.exact_div(&h, &cand) {
                            primes.push(cand);
                            h = q;
                            if h.degree() == Some(0) {
                                break;
                            }
                        }
                    }
                }
                loop {
                    let common = self.gcd(&rest, &g);
                    if common.degree() == Some(0) {
                        break;
                    }
                    rest = self.exact_div(&rest, &common).unwrap();
                }
            }
            i += 1;
        }
        primes.sort();
        Ok(primes
            .into_iter()
            .map(|pi| {
                let e = self.ord(a, &pi);
                (pi, e)
            })
            .collect())
    }

    fn places_by_size(&self) -> Box<dyn Iterator<Item = Place<FpPoly>> + '_> {
        let linear = self.irreducibles_of_degree(1).map(Place::Finite);
        let higher =
            (2usize..).flat_map(move |n| self.irreducibles_of_degree(n).map(Place::Finite));
        Box::new(linear.chain(std::iter::once(Place::Infinite)).chain(higher))
    }

    fn torsion_units(&self) -> Vec<FpPoly> {
        (1..self.p).map(FpPoly::constant).collect()
    }

    fn elements_up_to_height(&self, bound: u64, max_count: u64) -> Result<Vec<FpPoly>> {
        let count = self
            .p
            .checked_pow(bound as u32 + 1)
            .filter(|c| *c <= max_count)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "polynomials of degree <= {bound} over F{} exceed the enumeration budget",
                    self.p
                ))
            })?;
        let mut out: Vec<FpPoly> = (0..count)
            .map(|mut idx| {
                let mut coeffs = vec![0; bound as usize + 1];
                for c in coeffs.iter_mut() {
                    *c = idx % self.p;
                    idx /= self.p;
                }
                FpPoly::from_coeffs(coeffs)
            })
            .collect();
        out.sort();
        Ok(out)
    }

    fn default_height_cap(&self) -> BigUint {
        BigUint::from(256u32)
    }

    fn generator(&self) -> Option<(&'static str, FpPoly)> {
        Some(("t", self.t()))
    }

    fn parse_place(&self, s: &str) -> Result<Place<FpPoly>> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Place::Infinite);
        }
        let body = s.strip_prefix("pi:").ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("bad place token {s:?} for {}", self.field_name()),
        })?;
        let coeffs = body
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse {
                pos: 3,
                msg: format!("bad coefficient list {body:?}"),
            })?;
        let pi = self.poly(&coeffs);
        if !self.is_prime_element(&pi) {
            return Err(Error::Domain(format!(
                "{} is not a monic irreducible over F{}",
                self.format(&pi),
                self.p
            )));
        }
        Ok(Place::Finite(pi))
    }

    fn format_place(&self, place: &Place<FpPoly>) -> String {
        match place {
            Place::Finite(pi) => format!("pi:{}", pi.to_coeff_string()),
            Place::Infinite => "inf".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64) -> FpPolyRing {
        FpPolyRing::new(p).unwrap()
    }

    #[test]
    fn moebius_values() {
        let mu: Vec<i64> = (1..=12).map(moebius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_irreducibles(2, 4), BigUint::from(3u32));
        let cumulative: BigUint = (1..=4).map(|n| count_irreducibles(2, n)).sum();
        assert_eq!(cumulative, BigUint::from(8u32));
        assert_eq!(count_irreducibles(3, 2), BigUint::from(3u32));
        for p in [2, 3, 5, 7] {
            assert_eq!(count_irreducibles(p, 1), BigUint::from(p));
        }
    }

    #[test]
    fn enumerate_examples() {
        let r2 = ring(2);
        let got = enumerate_monic_irreducibles(2, 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(
            got,
            vec![r2.poly(&[0, 1]), r2.poly(&[1, 1]), r2.poly(&[1, 1, 1])]
        );
        assert_eq!(
            enumerate_monic_irreducibles(2, 1, DEFAULT_ENUMERATION_BUDGET)
                .unwrap()
                .len(),
            2
        );
        let r3 = ring(3);
        assert_eq!(
            enumerate_monic_irreducibles(3, 1, DEFAULT_ENUMERATION_BUDGET).unwrap(),
            vec![r3.poly(&[0, 1]), r3.poly(&[1, 1]), r3.poly(&[2, 1])]
        );
        assert!(matches!(
            enumerate_monic_irreducibles(2, 30, 1000),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn division_and_gcd() {
        let r = ring(3);
        let a = r.poly(&[1, 0, 1]); // t^2 + 1
        let b = r.poly(&[1, 1]); // t + 1
        let (q, rem) = r.div_rem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.degree().unwrap_or(0) < 1);
        let prod = r.mul(&a, &b);
        assert_eq!(r.gcd(&prod, &r.scale(&b, 2)), b);
    }

    #[test]
    fn factor_polynomials() {
        let r = ring(2);
        let t = r.t();
        let t1 = r.poly(&[1, 1]);
        let q = r.poly(&[1, 1, 1]);
        let c1 = r.poly(&[1, 1, 0, 1]); // t^3 + t + 1
        let c2 = r.poly(&[1, 0, 1, 1]); // t^3 + t^2 + 1
        let f = r.mul(
            &r.mul(&r.pow(&t, 3), &r.pow(&t1, 2)),
            &r.mul(&q, &r.mul(&c1, &c2)),
        );
        let fac = r.factor(&f, &FactorBudget::default()).unwrap();
        assert_eq!(fac, vec![(t, 3), (t1, 2), (q, 1), (c1, 1), (c2, 1)]);
        assert!(r
            .factor(&r.one(), &FactorBudget::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn place_parsing() {
        let r = ring(2);
        assert_eq!(
            r.parse_place("pi:1,1,1").unwrap(),
            Place::Finite(r.poly(&[1, 1, 1]))
        );
        assert!(r.parse_place("pi:1,0,1").is_err()); // (t+1)^2
        assert_eq!(r.format_place(&Place::Finite(r.poly(&[0, 1]))), "pi:0,1");
    }

    #[test]
    fn pretty_print() {
        let r = ring(3);
        assert_eq!(r.format(&r.poly(&[2, 0, 1])), "t^2 + 2");
        assert_eq!(r.format(&r.poly(&[0, 2])), "2*t");
        assert_eq!(r.format(&r.zero()), "0");
    }
}
