//! Explicit bounds on orbit sizes, cycle lengths, small residue fields and
//! unit-equation solution counts, evaluated exactly.
//!
//! Bounds whose formula contains a logarithm are returned as the ceiling of
//! a certified upper enclosure, so they never under-report the real value.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{FactorBudget, GlobalRing, Place, PlaceSet};
use crate::dynamics::OrbitReport;
use crate::error::{Error, Result};
use crate::json::{decimal, decimal_opt};
use crate::ratmap::{bad_places, RationalMap};

/// Default cap on the number of decimal digits of [`preper_total_bound`].
pub const DEFAULT_DIGIT_BUDGET: u64 = 1_000_000;

/// Parameters the bounds depend on: characteristic `p` (0 or a prime),
/// extension degree `D` over the prime field's rational function field (or
/// over `Q`), the number of places `s = |S|`, and optionally the map degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundContext {
    pub p: u64,
    pub degree: u32,
    pub s: u64,
    pub map_degree: Option<u64>,
}

impl BoundContext {
    pub fn new(p: u64, degree: u32, s: u64, map_degree: Option<u64>) -> Result<Self> {
        if p != 0 && !is_prime(p) {
            return Err(Error::Domain(format!(
                "characteristic {p} is neither 0 nor prime"
            )));
        }
        if degree == 0 {
            return Err(Error::Domain("extension degree must be at least 1".into()));
        }
        if s == 0 {
            return Err(Error::Domain("|S| must be at least 1".into()));
        }
        if matches!(map_degree, Some(d) if d < 2) {
            return Err(Error::Domain("map degree must be at least 2".into()));
        }
        Ok(BoundContext {
            p,
            degree,
            s,
            map_degree,
        })
    }

    /// The context of a map over the base field itself (`D = 1`).
    pub fn for_base_field<R: GlobalRing>(ring: &R, s: &PlaceSet<R>) -> Result<Self> {
        Self::new(ring.characteristic(), 1, s.len() as u64, None)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

/// All bounds applicable in one characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSet {
    /// Size of any finite orbit.
    #[serde(with = "decimal")]
    pub eta: BigUint,
    /// Minimal period of any periodic point.
    #[serde(with = "decimal")]
    pub cycle_bound: BigUint,
    /// Some place outside `S` has a residue field at most this large.
    #[serde(with = "decimal")]
    pub i_bound: BigUint,
    /// Solutions of a non-trivial S-unit equation (positive characteristic).
    #[serde(with = "decimal_opt", default, skip_serializing_if = "Option::is_none")]
    pub r_bound: Option<BigUint>,
    /// Solutions of `x + y = 1` in a group of rank `2s - 2` (characteristic 0).
    #[serde(with = "decimal_opt", default, skip_serializing_if = "Option::is_none")]
    pub evertse_bound: Option<BigUint>,
}

/// Working precision of the logarithm enclosures: series terms and the
/// number of binary fraction digits kept after outward rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub terms: u32,
    pub bits: u32,
}

impl Precision {
    /// Width below `10^-40` for every argument the bounds use.
    pub const DEFAULT: Precision = Precision {
        terms: 48,
        bits: 160,
    };

    pub fn scaled(self, factor: u32) -> Precision {
        Precision {
            terms: self.terms * factor,
            bits: self.bits * factor,
        }
    }
}

/// A closed interval `[lo, hi]` of non-negative rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    fn exact(x: BigRational) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    fn scale(&self, c: &BigRational) -> Self {
        Enclosure {
            lo: &self.lo * c,
            hi: &self.hi * c,
        }
    }

    fn mul(&self, o: &Enclosure) -> Self {
        Enclosure {
            lo: &self.lo * &o.lo,
            hi: &self.hi * &o.hi,
        }
    }

    fn pow(&self, e: u32) -> Self {
        Enclosure {
            lo: pow_rat(&self.lo, e),
            hi: pow_rat(&self.hi, e),
        }
    }

    fn max(self, o: Enclosure) -> Self {
        Enclosure {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    /// Smallest integer not below the upper end.
    pub fn ceil(&self) -> BigUint {
        self.hi
            .ceil()
            .to_integer()
            .to_biguint()
            .expect("enclosures are non-negative")
    }
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * &scale).floor().to_integer(), scale)
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * &scale).ceil().to_integer(), scale)
}

/// `2 atanh(z)` for `0 <= z < 1`, which is `ln((1 + z) / (1 - z))`. Terms
/// are accumulated in fixed point with outward rounding; the tail after
/// `terms` terms is at most `2 z^(2N+1) / ((2N+1)(1 - z^2))`.
fn two_atanh(z: &BigRational, prec: Precision) -> Enclosure {
    let guard = prec.bits + 32;
    let scale = BigInt::one() << guard;
    let (num, den) = (z.numer(), z.denom());
    let (num2, den2) = (num * num, den * den);
    let (mut pn, mut pd) = (num.clone(), den.clone());
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for k in 0..prec.terms {
        let d = &pd * (2 * k + 1);
        let (q, r) = (&pn * &scale).div_rem(&d);
        if !r.is_zero() {
            hi += 1;
        }
        lo += &q;
        hi += q;
        pn *= &num2;
        pd *= &den2;
    }
    let n = 2 * prec.terms as u64 + 1;
    let tail = BigRational::new(pn, pd) / (rat(n) * (BigRational::one() - z * z));
    let lo = BigRational::new(lo * 2, scale.clone());
    let hi = (BigRational::new(hi, scale) + tail) * rat(2);
    Enclosure {
        lo: round_down(&lo, prec.bits),
        hi: round_up(&hi, prec.bits),
    }
}

/// Natural logarithm of a rational `x >= 1`, enclosed. Writing
/// `x = 2^k m` with `1 <= m < 2`, `ln x = k ln 2 + ln m`, and both logarithms
/// go through [`two_atanh`] with argument at most `1/3`.
pub fn ln_enclosure(x: &BigRational, prec: Precision) -> Result<Enclosure> {
    if *x < BigRational::one() {
        return Err(Error::Domain(
            "logarithm enclosure needs an argument of at least 1".into(),
        ));
    }
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two_k = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(BigInt::one() << k as u64)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
        }
    };
    while two_k(k) > *x {
        k -= 1;
    }
    while two_k(k + 1) <= *x {
        k += 1;
    }
    let m = x / two_k(k);
    let one = BigRational::one();
    let z = (&m - &one) / (&m + &one);
    let ln_m = two_atanh(&z, prec);
    let ln2 = two_atanh(&BigRational::new(1.into(), 3.into()), prec);
    let k = rat(k as u64);
    Ok(Enclosure {
        lo: &ln2.lo * &k + ln_m.lo,
        hi: &ln2.hi * &k + ln_m.hi,
    })
}

fn ln_of(n: u64, prec: Precision) -> Enclosure {
    ln_enclosure(&rat(n), prec).expect("arguments are at least 5")
}

/// `[a * ln(b)]^e`, enclosed.
fn log_power(a: u64, b: u64, e: u32, prec: Precision) -> Enclosure {
    ln_of(b, prec).scale(&rat(a)).pow(e)
}

/// The characteristic-zero orbit bound
/// `max{(2^(16s-8) + 3) [12 s ln(5s)]^D, [12(s+2) ln(5s+5)]^(4D)}`.
pub fn eta_char0_enclosure(degree: u32, s: u64, prec: Precision) -> Enclosure {
    let evertse_plus = BigRational::from_integer(BigInt::from(
        (BigUint::one() << (16 * s - 8) as usize) + 3u32,
    ));
    let first = log_power(12 * s, 5 * s, degree, prec).mul(&Enclosure::exact(evertse_plus));
    let second = log_power(12 * (s + 2), 5 * s + 5, 4 * degree, prec);
    first.max(second)
}

/// The characteristic-zero cycle bound `[12(s+1) ln(5(s+1))]^(4D)`.
pub fn cycle_char0_enclosure(degree: u32, s: u64, prec: Precision) -> Enclosure {
    log_power(12 * (s + 1), 5 * (s + 1), 4 * degree, prec)
}

/// `max{(ps)^(2D), p^(4s-2)}`, the common factor of the orbit and cycle
/// bounds in positive characteristic.
fn char_p_factor(p: u64, degree: u32, s: u64) -> BigUint {
    let ps = BigUint::from(p * s);
    ps.pow(2 * degree)
        .max(BigUint::from(p).pow((4 * s - 2) as u32))
}

/// `p^(2s-2) (p^(2s-2) + p - 2) / (p - 1)`.
pub fn unit_equation_bound(p: u64, s: u64) -> BigUint {
    let q = BigUint::from(p).pow((2 * s - 2) as u32);
    let num = &q * (&q + BigUint::from(p) - 2u32);
    let (quot, rem) = num.div_rem(&BigUint::from(p - 1));
    debug_assert!(rem.is_zero());
    quot
}

/// `2^(8(r+1))` for a group of rank `r`.
pub fn evertse_bound(rank: u64) -> BigUint {
    BigUint::one() << (8 * (rank + 1)) as usize
}

pub fn compute_bounds(ctx: &BoundContext) -> BoundSet {
    compute_bounds_with(ctx, Precision::DEFAULT)
}

/// [`compute_bounds`] with an explicit logarithm precision.
pub fn compute_bounds_with(ctx: &BoundContext, prec: Precision) -> BoundSet {
    let (p, d, s) = (ctx.p, ctx.degree, ctx.s);
    if p == 0 {
        let i = log_power(12 * s, 5 * s, d, prec).ceil() - 1u32;
        return BoundSet {
            eta: eta_char0_enclosure(d, s, prec).ceil(),
            cycle_bound: cycle_char0_enclosure(d, s, prec).ceil(),
            i_bound: i,
            r_bound: None,
            evertse_bound: Some(evertse_bound(2 * s - 2)),
        };
    }
    let ps = BigUint::from(p * s);
    let big = ps.pow(4 * d);
    let factor = char_p_factor(p, d, s);
    BoundSet {
        eta: &big * &factor,
        cycle_bound: (big - 1u32) * factor,
        i_bound: ps.pow(2 * d) - 1u32,
        r_bound: Some(unit_equation_bound(p, s)),
        evertse_bound: None,
    }
}

/// Length bound `(ps)^(2D)` for a cycle whose points all sit at the same
/// distance from one another outside `S`.
pub fn equidistant_cycle_bound(ctx: &BoundContext) -> Result<BigUint> {
    if ctx.p == 0 {
        return Err(Error::Unsupported(
            "this cycle bound needs positive characteristic".into(),
        ));
    }
    Ok(BigUint::from(ctx.p * ctx.s).pow(2 * ctx.degree))
}

/// `2 + 4 D^2`.
///
/// This is the length bound claimed for periodic points of degree-one maps.
/// It rests on the degree of an `n`-th root of unity being `phi(n)`, which
/// fails in positive characteristic: `z + 1` over `F_7(t)` has a 7-cycle.
/// [`verify_report`] therefore does not use it.
pub fn automorphism_cycle_bound(degree: u32) -> BigUint {
    BigUint::from(2u32) + BigUint::from(4u32) * BigUint::from(degree).pow(2)
}

/// `lcm(1, ..., c)`, built as the product of `q^floor(log_q c)` over primes
/// `q <= c`.
pub fn lcm_up_to(c: u64) -> BigUint {
    let mut n = BigUint::one();
    for q in (2..=c).filter(|&q| is_prime(q)) {
        let mut pk = q;
        while pk <= c / q {
            pk *= q;
        }
        n *= pk;
    }
    n
}

/// `d^B (d^n + 1)` with `n = lcm(1, ..., C)`: a bound on the number of
/// preperiodic points given an orbit bound `B` and a cycle bound `C`.
pub fn preper_total_bound(b: u64, c: u64, d: u64, max_digits: u64) -> Result<BigUint> {
    if b == 0 || c == 0 || d < 2 {
        return Err(Error::Domain("need B, C >= 1 and d >= 2".into()));
    }
    let n = lcm_up_to(c);
    let log10_d = (d as f64).log10();
    let digits = (n.to_f64().unwrap_or(f64::INFINITY) + b as f64) * log10_d;
    if digits > max_digits as f64 {
        return Err(Error::Budget(format!(
            "result has about {digits:.0} digits, over the budget of {max_digits}"
        )));
    }
    let n = n.to_u32().expect("digit budget keeps the exponent small");
    let b = u32::try_from(b).map_err(|_| Error::Budget("orbit bound exponent too large".into()))?;
    let d = BigUint::from(d);
    Ok(d.pow(b) * (d.pow(n) + 1u32))
}

/// One comparison of an observed quantity against a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    #[serde(with = "decimal")]
    pub observed: BigUint,
    #[serde(with = "decimal")]
    pub bound: BigUint,
    pub pass: bool,
}

impl BoundCheck {
    fn new(name: &str, observed: usize, bound: BigUint) -> Self {
        let observed = BigUint::from(observed);
        let pass = observed <= bound;
        BoundCheck {
            name: name.into(),
            observed,
            bound,
            pass,
        }
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.pass { "ok" } else { "FAIL" };
        write!(
            f,
            "{}: {} <= {} {mark}",
            self.name, self.observed, self.bound
        )
    }
}

/// Checks orbits of one map against the bounds for `S`, after confirming
/// that the map has good reduction outside `S`.
#[derive(Debug, Clone)]
pub struct ReportVerifier {
    bounds: BoundSet,
    rational_units_only: bool,
}

impl ReportVerifier {
    pub fn new<R: GlobalRing>(
        ring: &R,
        map: &RationalMap<R::Elem>,
        s: &PlaceSet<R>,
    ) -> Result<Self> {
        let bad = bad_places(ring, map, &FactorBudget::default())?;
        if let Some(missing) = bad.iter().find(|p| !s.contains(p)) {
            return Err(Error::Precondition(format!(
                "S = {{{}}} misses the bad place {}",
                s.format(),
                ring.format_place(missing)
            )));
        }
        let ctx = BoundContext::for_base_field(ring, s)?;
        Ok(ReportVerifier {
            bounds: compute_bounds(&ctx),
            rational_units_only: ring.infinity_is_archimedean() && s.places() == [Place::Infinite],
        })
    }

    pub fn bounds(&self) -> &BoundSet {
        &self.bounds
    }

    pub fn verify<E: Clone + Eq + std::hash::Hash>(
        &self,
        report: &OrbitReport<E>,
    ) -> Vec<BoundCheck> {
        let (n, total) = (report.n(), report.total());
        let mut out = vec![
            BoundCheck::new("orbit size", total, self.bounds.eta.clone()),
            BoundCheck::new("cycle length", n, self.bounds.cycle_bound.clone()),
        ];
        if self.rational_units_only {
            out.push(BoundCheck::new(
                "cycle length, good reduction everywhere",
                n,
                3u32.into(),
            ));
            out.push(BoundCheck::new(
                "orbit size, good reduction everywhere",
                total,
                12u32.into(),
            ));
        }
        out
    }
}

/// Compares a finite orbit with every bound that applies to it.
pub fn verify_report<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    report: &OrbitReport<R::Elem>,
    s: &PlaceSet<R>,
) -> Result<Vec<BoundCheck>> {
    Ok(ReportVerifier::new(ring, map, s)?.verify(report))
}
