//! Text syntax for maps, points and field elements.
//!
//! Maps are affine expressions in `z` such as `(z^2+1)/(2*z - 1)`, or
//! homogeneous pairs `[X^2 + Y^2 : 2*X*Y]`. Over `Fp(t)` the identifier `t`
//! names the generator. Points are `inf`, `[a : b]`, or an affine value.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::{FieldOps, Frac, FractionField, GlobalRing};
use crate::error::{parse_err, Error, Result};
use crate::projective::{infinity, normalize, ProjPoint};
use crate::ratmap::RationalMap;

const MAX_EXPONENT: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '∞' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            if c == '∞' {
                i = start + 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Ident(text)));
        } else if c == '*' && chars.get(i + 1).map(|x| x.1) == Some('*') {
            out.push((pos, Tok::Op('^')));
            i += 2;
        } else if "+-*/^()[]:".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return parse_err(pos, format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(BigInt),
    Var(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u64),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(s)?,
            at: 0,
            end: s.len(),
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            parse_err(self.pos(), format!("expected '{op}'"))
        }
    }

    fn done(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => parse_err(self.pos(), "unexpected trailing input"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_) | Tok::Ident(_)) | Some(Tok::Op('('))
            ) {
                // implicit product, as in 2z or (z+1)(z-1)
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let e = n.to_u64().filter(|&e| e <= MAX_EXPONENT);
                    match e {
                        Some(e) => Ok(Expr::Pow(Box::new(base), e)),
                        None => parse_err(pos, format!("exponent {n} exceeds {MAX_EXPONENT}")),
                    }
                }
                _ => parse_err(pos, "expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Expr::Var(name, pos))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => parse_err(pos, "expected a number, variable or '('"),
            None => parse_err(pos, "unexpected end of input"),
        }
    }
}

/// Dense univariate polynomials over a field, ascending coefficients with no
/// trailing zeros.
struct PolyOps<'a, Fd: FieldOps>(&'a Fd);

impl<Fd: FieldOps> PolyOps<'_, Fd> {
    fn trim(&self, mut a: Vec<Fd::Elem>) -> Vec<Fd::Elem> {
        while a.last().is_some_and(|c| self.0.is_zero(c)) {
            a.pop();
        }
        a
    }

    fn add(&self, a: &[Fd::Elem], b: &[Fd::Elem]) -> Vec<Fd::Elem> {
        let k = self.0;
        let n = a.len().max(b.len());
        let z = k.zero();
        self.trim(
            (0..n)
                .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    fn neg(&self, a: &[Fd::Elem]) -> Vec<Fd::Elem> {
        a.iter().map(|c| self.0.neg(c)).collect()
    }

    fn mul(&self, a: &[Fd::Elem], b: &[Fd::Elem]) -> Vec<Fd::Elem> {
        let k = self.0;
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![k.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn rem(&self, a: &[Fd::Elem], b: &[Fd::Elem]) -> Vec<Fd::Elem> {
        let k = self.0;
        let mut r = a.to_vec();
        let inv = k.inv(b.last().unwrap()).unwrap();
        while r.len() >= b.len() {
            let c = k.mul(r.last().unwrap(), &inv);
            let shift = r.len() - b.len();
            for (j, y) in b.iter().enumerate() {
                r[shift + j] = k.sub(&r[shift + j], &k.mul(&c, y));
            }
            r = self.trim(r);
        }
        r
    }

    fn gcd(&self, a: &[Fd::Elem], b: &[Fd::Elem]) -> Vec<Fd::Elem> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }
}

/// A quotient of polynomials in one variable.
type RatFn<T> = (Vec<T>, Vec<T>);

fn eval_affine<R: GlobalRing>(
    k: &FractionField<R>,
    e: &Expr,
    var: Option<&str>,
) -> Result<RatFn<Frac<R::Elem>>> {
    let ops = PolyOps(k);
    let one = vec![k.one()];
    Ok(match e {
        Expr::Num(n) => (ops.trim(vec![k.from_integral(k.ring.from_bigint(n))]), one),
        Expr::Var(name, pos) => {
            if Some(name.as_str()) == var {
                (vec![k.zero(), k.one()], one)
            } else {
                (vec![generator_value(k, name, *pos)?], one)
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (an, ad) = eval_affine(k, a, var)?;
            let (mut bn, bd) = eval_affine(k, b, var)?;
            if matches!(e, Expr::Sub(..)) {
                bn = ops.neg(&bn);
            }
            (
                ops.add(&ops.mul(&an, &bd), &ops.mul(&bn, &ad)),
                ops.mul(&ad, &bd),
            )
        }
        Expr::Mul(a, b) => {
            let (an, ad) = eval_affine(k, a, var)?;
            let (bn, bd) = eval_affine(k, b, var)?;
            (ops.mul(&an, &bn), ops.mul(&ad, &bd))
        }
        Expr::Div(a, b, pos) => {
            let (an, ad) = eval_affine(k, a, var)?;
            let (bn, bd) = eval_affine(k, b, var)?;
            if bn.is_empty() {
                return parse_err(*pos, "division by the zero polynomial");
            }
            (ops.mul(&an, &bd), ops.mul(&ad, &bn))
        }
        Expr::Neg(a) => {
            let (n, d) = eval_affine(k, a, var)?;
            (ops.neg(&n), d)
        }
        Expr::Pow(a, exp) => {
            let (n, d) = eval_affine(k, a, var)?;
            let (mut pn, mut pd) = (one.clone(), one);
            for _ in 0..*exp {
                pn = ops.mul(&pn, &n);
                pd = ops.mul(&pd, &d);
            }
            (pn, pd)
        }
    })
}

fn generator_value<R: GlobalRing>(
    k: &FractionField<R>,
    name: &str,
    pos: usize,
) -> Result<Frac<R::Elem>> {
    match k.ring.generator() {
        Some((g, value)) if g == name => Ok(k.from_integral(value)),
        _ => parse_err(
            pos,
            format!("unknown identifier {name:?} over {}", k.ring.field_name()),
        ),
    }
}

/// A form in `X, Y`: exponent pair to coefficient.
type Bivariate<T> = BTreeMap<(u64, u64), T>;

fn eval_bivariate<R: GlobalRing>(
    k: &FractionField<R>,
    e: &Expr,
) -> Result<Bivariate<Frac<R::Elem>>> {
    let trim = |mut m: Bivariate<Frac<R::Elem>>| {
        m.retain(|_, c| !k.is_zero(c));
        m
    };
    let constant = |c: Frac<R::Elem>| trim(BTreeMap::from([((0, 0), c)]));
    let add = |a: Bivariate<Frac<R::Elem>>, b: Bivariate<Frac<R::Elem>>| {
        let mut out = a;
        for (key, c) in b {
            let cur = out.remove(&key).unwrap_or_else(|| k.zero());
            out.insert(key, k.add(&cur, &c));
        }
        trim(out)
    };
    let mul = |a: &Bivariate<Frac<R::Elem>>, b: &Bivariate<Frac<R::Elem>>| {
        let mut out: Bivariate<Frac<R::Elem>> = BTreeMap::new();
        for ((ax, ay), ca) in a {
            for ((bx, by), cb) in b {
                let key = (ax + bx, ay + by);
                let cur = out.remove(&key).unwrap_or_else(|| k.zero());
                out.insert(key, k.add(&cur, &k.mul(ca, cb)));
            }
        }
        trim(out)
    };
    let negate =
        |a: Bivariate<Frac<R::Elem>>| a.into_iter().map(|(key, c)| (key, k.neg(&c))).collect();
    Ok(match e {
        Expr::Num(n) => constant(k.from_integral(k.ring.from_bigint(n))),
        Expr::Var(name, pos) => match name.as_str() {
            "X" | "x" => BTreeMap::from([((1, 0), k.one())]),
            "Y" | "y" => BTreeMap::from([((0, 1), k.one())]),
            _ => constant(generator_value(k, name, *pos)?),
        },
        Expr::Add(a, b) => add(eval_bivariate(k, a)?, eval_bivariate(k, b)?),
        Expr::Sub(a, b) => add(eval_bivariate(k, a)?, negate(eval_bivariate(k, b)?)),
        Expr::Mul(a, b) => mul(&eval_bivariate(k, a)?, &eval_bivariate(k, b)?),
        Expr::Neg(a) => negate(eval_bivariate(k, a)?),
        Expr::Div(a, b, pos) => {
            let den = eval_bivariate(k, b)?;
            let c = match den.into_iter().collect::<Vec<_>>().as_slice() {
                [((0, 0), c)] => c.clone(),
                [] => return parse_err(*pos, "division by zero"),
                _ => return parse_err(*pos, "forms may only be divided by constants"),
            };
            let inv = constant(k.inv(&c).unwrap());
            mul(&eval_bivariate(k, a)?, &inv)
        }
        Expr::Pow(a, exp) => {
            let base = eval_bivariate(k, a)?;
            (0..*exp).fold(constant(k.one()), |acc, _| mul(&acc, &base))
        }
    })
}

/// Scales field coefficients by the lcm of their denominators.
fn clear_denominators<R: GlobalRing>(
    k: &FractionField<R>,
    coeffs: &[Frac<R::Elem>],
) -> Vec<R::Elem> {
    let r = &k.ring;
    let lcm = coeffs.iter().fold(r.one(), |acc, c| {
        let g = r.gcd(&acc, &c.den);
        r.mul(&acc, &r.exact_div(&c.den, &g).unwrap())
    });
    coeffs
        .iter()
        .map(|c| r.mul(&c.num, &r.exact_div(&lcm, &c.den).unwrap()))
        .collect()
}

fn split_pair(s: &str) -> Option<(usize, &str, &str)> {
    let t = s.trim();
    let inner = t.strip_prefix('[')?.strip_suffix(']')?;
    let colon = inner.find(':')?;
    let offset = s.find('[').unwrap() + 1;
    Some((offset, &inner[..colon], &inner[colon + 1..]))
}

fn parse_expr(s: &str, offset: usize) -> Result<Expr> {
    let shift = |e: Error| match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos: pos + offset,
            msg,
        },
        other => other,
    };
    let mut p = Parser::new(s).map_err(shift)?;
    let e = p.expr().map_err(shift)?;
    p.done().map_err(shift)?;
    Ok(e)
}

/// Parses an affine expression in `z` or a homogeneous pair `[F : G]` into
/// the primitive model of the map.
pub fn parse_map<R: GlobalRing>(ring: &R, s: &str) -> Result<RationalMap<R::Elem>> {
    let k = FractionField::new(ring.clone());
    let (f, g) = match split_pair(s) {
        Some((offset, fs, gs)) => {
            let fb = eval_bivariate(&k, &parse_expr(fs, offset)?)?;
            let gb = eval_bivariate(&k, &parse_expr(gs, offset + fs.len() + 1)?)?;
            let degree_of = |m: &Bivariate<Frac<R::Elem>>, name: &str| -> Result<u64> {
                let degs: Vec<u64> = m.keys().map(|(a, b)| a + b).collect();
                match degs.first() {
                    None => Err(Error::DegenerateMap(format!("{name} is the zero form"))),
                    Some(&d) if degs.iter().all(|&e| e == d) => Ok(d),
                    Some(_) => Err(Error::DegenerateMap(format!("{name} is not homogeneous"))),
                }
            };
            let d = degree_of(&fb, "F")?;
            if degree_of(&gb, "G")? != d {
                return Err(Error::DegenerateMap(
                    "F and G have different degrees".into(),
                ));
            }
            let dense = |m: &Bivariate<Frac<R::Elem>>| -> Vec<Frac<R::Elem>> {
                (0..=d)
                    .map(|i| m.get(&(i, d - i)).cloned().unwrap_or_else(|| k.zero()))
                    .collect()
            };
            (dense(&fb), dense(&gb))
        }
        None => {
            let (n, den) = eval_affine(&k, &parse_expr(s, 0)?, Some("z"))?;
            if n.is_empty() {
                return Err(Error::DegenerateMap("the zero map is constant".into()));
            }
            let ops = PolyOps(&k);
            if ops.gcd(&n, &den).len() > 1 {
                return Err(Error::DegenerateMap(
                    "numerator and denominator share a common factor".into(),
                ));
            }
            let d = n.len().max(den.len()) - 1;
            if d == 0 {
                return Err(Error::DegenerateMap("constant map".into()));
            }
            let pad = |mut v: Vec<Frac<R::Elem>>| {
                v.resize(d + 1, k.zero());
                v
            };
            (pad(n), pad(den))
        }
    };
    let all: Vec<Frac<R::Elem>> = f.iter().chain(&g).cloned().collect();
    let ints = clear_denominators(&k, &all);
    let d1 = f.len();
    RationalMap::new(ring, ints[..d1].to_vec(), ints[d1..].to_vec())
}

/// Parses an element of the fraction field, such as `-3/4` or `(t+1)/t^2`.
pub fn parse_field_element<R: GlobalRing>(ring: &R, s: &str) -> Result<Frac<R::Elem>> {
    parse_constant(&FractionField::new(ring.clone()), s, 0)
}

fn parse_constant<R: GlobalRing>(
    k: &FractionField<R>,
    s: &str,
    offset: usize,
) -> Result<Frac<R::Elem>> {
    let (n, d) = eval_affine(k, &parse_expr(s, offset)?, None)?;
    let n = n.into_iter().next().unwrap_or_else(|| k.zero());
    let d = d.into_iter().next().expect("denominators are nonzero");
    Ok(k.div(&n, &d).unwrap())
}

/// Parses `inf`, `[a : b]`, or an affine value `a`.
pub fn parse_point<R: GlobalRing>(ring: &R, s: &str) -> Result<ProjPoint<R::Elem>> {
    let k = FractionField::new(ring.clone());
    let t = s.trim();
    if matches!(t, "inf" | "infinity" | "∞") {
        return Ok(infinity(ring));
    }
    match split_pair(s) {
        Some((offset, xs, ys)) => {
            let x = parse_constant(&k, xs, offset)?;
            let y = parse_constant(&k, ys, offset + xs.len() + 1)?;
            normalize(ring, &x, &y)
        }
        None => {
            let z = parse_constant(&k, s, 0)?;
            normalize(ring, &z, &k.one())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{EuclideanRing, FpPolyRing, Integers};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn affine_examples() {
        let z = Integers;
        let m = parse_map(&z, "z^2 - 1").unwrap();
        assert_eq!(
            (m.f(), m.g()),
            (&ints(&[-1, 0, 1])[..], &ints(&[1, 0, 0])[..])
        );
        let m = parse_map(&z, "(z^2+1)/(2*z)").unwrap();
        assert_eq!(
            (m.f(), m.g()),
            (&ints(&[1, 0, 1])[..], &ints(&[0, 2, 0])[..])
        );
        let m = parse_map(&z, "z^2/2 - 3/4").unwrap();
        assert_eq!(
            (m.f(), m.g()),
            (&ints(&[-3, 0, 2])[..], &ints(&[4, 0, 0])[..])
        );
        let m = parse_map(&z, "2z(z+1)").unwrap();
        assert_eq!(m.f(), &ints(&[0, 2, 2])[..]);
        assert_eq!(m.degree(), 2);
    }

    #[test]
    fn function_field_examples() {
        let r = FpPolyRing::new(2).unwrap();
        let m = parse_map(&r, "z^2/t").unwrap();
        assert_eq!(m.f(), &[r.zero(), r.zero(), r.one()]);
        assert_eq!(m.g(), &[r.t(), r.zero(), r.zero()]);
        let m = parse_map(&r, "(t*z^2 + 1)/z").unwrap();
        assert_eq!(m.f(), &[r.one(), r.zero(), r.t()]);
        // coefficients reduce mod p
        let m = parse_map(&r, "3*z^2 + 2").unwrap();
        assert_eq!(m.f(), &[r.zero(), r.zero(), r.one()]);
    }

    #[test]
    fn pair_form() {
        let z = Integers;
        let a = parse_map(&z, "[X^2 + Y^2 : 2*X*Y]").unwrap();
        let b = parse_map(&z, "(z^2+1)/(2*z)").unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            parse_map(&z, "[X^2 : Y]"),
            Err(Error::DegenerateMap(_))
        ));
        assert!(matches!(
            parse_map(&z, "[X^2 - Y^2 : X*Y - Y^2]"),
            Err(Error::DegenerateMap(_))
        ));
    }

    #[test]
    fn errors() {
        let z = Integers;
        assert!(matches!(
            parse_map(&z, "z^2 +"),
            Err(Error::Parse { pos: 5, .. })
        ));
        assert!(matches!(
            parse_map(&z, "z^2 $ 1"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_map(&z, "z/(z-z)"),
            Err(Error::Parse { pos: 1, .. })
        ));
        assert!(matches!(
            parse_map(&z, "(z^2-1)/(z-1)"),
            Err(Error::DegenerateMap(_))
        ));
        assert!(matches!(parse_map(&z, "5"), Err(Error::DegenerateMap(_))));
        assert!(matches!(
            parse_map(&z, "t*z^2"),
            Err(Error::Parse { pos: 0, .. })
        ));
    }

    #[test]
    fn points() {
        let z = Integers;
        let p = parse_point(&z, "[2/4 : 3]").unwrap();
        assert_eq!((p.x, p.y), (BigInt::from(1), BigInt::from(6)));
        let p = parse_point(&z, "-3/6").unwrap();
        assert_eq!((p.x, p.y), (BigInt::from(-1), BigInt::from(2)));
        let p = parse_point(&z, "inf").unwrap();
        assert_eq!((p.x, p.y), (BigInt::from(1), BigInt::from(0)));
        let r = FpPolyRing::new(3).unwrap();
        let p = parse_point(&r, "1/t").unwrap();
        assert_eq!((p.x, p.y), (r.one(), r.t()));
        assert!(parse_point(&z, "[0 : 0]").is_err());
    }
}
