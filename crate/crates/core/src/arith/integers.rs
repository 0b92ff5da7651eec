use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::places::Place;
use crate::arith::residue::{ResidueElem, ResidueField};
use crate::arith::ring::{EuclideanRing, FactorBudget, GlobalRing};
use crate::error::{Error, Result};

/// The rational integers, the ring of integers of `Q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl EuclideanRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_rem(b)
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }
    fn unit_part(&self, a: &BigInt) -> BigInt {
        if a.sign() == Sign::Minus {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn unit_inverse(&self, u: &BigInt) -> BigInt {
        u.clone()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn height(&self, a: &BigInt) -> BigUint {
        a.magnitude().clone()
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl GlobalRing for Integers {
    fn field_name(&self) -> String {
        "Q".to_string()
    }

    fn infinity_is_archimedean(&self) -> bool {
        true
    }

    fn is_prime_element(&self, a: &BigInt) -> bool {
        a.is_positive() && is_prime(a.magnitude())
    }

    fn infinite_valuation(&self, _a: &BigInt) -> Option<i64> {
        None
    }

    fn residue_field(&self, place: &Place<BigInt>) -> Result<ResidueField> {
        match place {
            Place::Finite(p) => {
                let p = p
                    .to_u64()
                    .ok_or_else(|| Error::Budget(format!("residue field F{p} is too large")))?;
                ResidueField::prime(p)
            }
            Place::Infinite => Err(Error::UnsupportedPlace(
                "the archimedean place of Q has no residue field".into(),
            )),
        }
    }

    fn residue_field_size(&self, place: &Place<BigInt>) -> Result<BigUint> {
        match place {
            Place::Finite(p) => Ok(p.magnitude().clone()),
            Place::Infinite => Err(Error::UnsupportedPlace(
                "the archimedean place of Q has no residue field".into(),
            )),
        }
    }

    fn reduce_finite(&self, a: &BigInt, field: &ResidueField) -> ResidueElem {
        let p = BigInt::from(field.characteristic());
        a.mod_floor(&p).to_u64().expect("residue below p")
    }

    fn reduce_infinite(&self, _a: &BigInt, _k: u64, _field: &ResidueField) -> ResidueElem {
        unreachable!("Q has no non-archimedean infinite place")
    }

    fn factor(&self, a: &BigInt, budget: &FactorBudget) -> Result<Vec<(BigInt, u64)>> {
        if a.is_zero() {
            return Err(Error::Domain("cannot factor zero".into()));
        }
        let mut n = a.magnitude().clone();
        let mut out = Vec::new();
        let mut d = BigUint::from(2u32);
        let mut trials = 0u64;
        while &d * &d <= n {
            if trials >= budget.max_trials {
                return Err(Error::Budget(format!(
                    "trial division of {a} exceeded {} divisors",
                    budget.max_trials
                )));
            }
            trials += 1;
            if (&n % &d).is_zero() {
                let mut e = 0;
                while (&n % &d).is_zero() {
                    n /= &d;
                    e += 1;
                }
                out.push((BigInt::from(d.clone()), e));
            }
            d += if d == BigUint::from(2u32) { 1u32 } else { 2u32 };
        }
        if !n.is_one() {
            out.push((BigInt::from(n), 1));
        }
        Ok(out)
    }

    fn places_by_size(&self) -> Box<dyn Iterator<Item = Place<BigInt>> + '_> {
        Box::new(
            (2u64..)
                .filter(|&n| is_prime_u64(n))
                .map(|n| Place::Finite(BigInt::from(n))),
        )
    }

    fn torsion_units(&self) -> Vec<BigInt> {
        vec![BigInt::one(), -BigInt::one()]
    }

    fn elements_up_to_height(&self, bound: u64, max_count: u64) -> Result<Vec<BigInt>> {
        let count = bound.saturating_mul(2).saturating_add(1);
        if count > max_count {
            return Err(Error::Budget(format!(
                "{count} integers of height <= {bound} exceed the enumeration budget"
            )));
        }
        let b = bound as i64;
        Ok((-b..=b).map(BigInt::from).collect())
    }

    fn default_height_cap(&self) -> BigUint {
        num_traits::pow(BigUint::from(10u32), 40)
    }

    fn parse_place(&self, s: &str) -> Result<Place<BigInt>> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Place::Infinite);
        }
        let body = s.strip_prefix("p:").ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("bad place token {s:?} for Q"),
        })?;
        let p: BigInt = body.trim().parse().map_err(|_| Error::Parse {
            pos: 2,
            msg: format!("bad prime {body:?}"),
        })?;
        if !self.is_prime_element(&p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Place::Finite(p))
    }

    fn format_place(&self, place: &Place<BigInt>) -> String {
        match place {
            Place::Finite(p) => format!("p:{p}"),
            Place::Infinite => "inf".to_string(),
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => {
            // Probabilistic Miller-Rabin for inputs beyond 64 bits.
            let one = BigUint::one();
            let n1 = n - &one;
            let s = n1.trailing_zeros().unwrap_or(0);
            let d = &n1 >> s;
            'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                let mut x = BigUint::from(a).modpow(&d, n);
                if x == one || x == n1 {
                    continue;
                }
                for _ in 1..s {
                    x = (&x * &x) % n;
                    if x == n1 {
                        continue 'witness;
                    }
                }
                return false;
            }
            true
        }
    }
}
