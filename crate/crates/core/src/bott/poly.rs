//! Exact polynomials and rational functions in the torus characters `u`, `v`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, rat, Rational};
use crate::upoly;

/// Sparse polynomial keyed by `(deg_u, deg_v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyUV {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl PolyUV {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, du: u32, dv: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((du, dv), c);
        }
        PolyUV { terms }
    }

    pub fn u() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn v() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `p u + q v`
    pub fn linear(p: i64, q: i64) -> Self {
        Self::monomial(rat(p), 1, 0).add(&Self::monomial(rat(q), 0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &PolyUV) -> PolyUV {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyUV {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &PolyUV) -> PolyUV {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> PolyUV {
        let mut out = PolyUV::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * k);
        }
        out
    }

    pub fn mul(&self, o: &PolyUV) -> PolyUV {
        let mut out = PolyUV::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> PolyUV {
        (0..n).fold(PolyUV::one(), |acc, _| acc.mul(self))
    }

    pub fn swap_uv(&self) -> PolyUV {
        PolyUV {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (&(a, b), c)| {
                acc + c
                    * num_traits::pow(u.clone(), a as usize)
                    * num_traits::pow(v.clone(), b as usize)
            })
    }

    fn deg_v(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, a polynomial in `u` alone.
    fn coeff_v(&self, k: u32) -> PolyUV {
        PolyUV {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.1 == k)
                .map(|(&(a, _), c)| ((a, 0), c.clone()))
                .collect(),
        }
    }

    /// Leading term for the order comparing `v` degree first.
    fn lead(&self) -> Option<((u32, u32), &Rational)> {
        self.terms
            .iter()
            .max_by_key(|(k, _)| (k.1, k.0))
            .map(|(k, c)| (*k, c))
    }

    fn monic(&self) -> PolyUV {
        match self.lead() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// `self / o` when the division is exact.
    pub fn div_exact(&self, o: &PolyUV) -> Option<PolyUV> {
        let ((ou, ov), oc) = o.lead()?;
        let mut r = self.clone();
        let mut q = PolyUV::zero();
        while let Some(((ru, rv), rc)) = r.lead() {
            if ru < ou || rv < ov {
                return None;
            }
            let t = PolyUV::monomial(rc / oc, ru - ou, rv - ov);
            r = r.sub(&t.mul(o));
            q = q.add(&t);
        }
        Some(q)
    }

    fn to_upoly_u(&self) -> Vec<Rational> {
        let n = self
            .terms
            .keys()
            .map(|k| k.0)
            .max()
            .map_or(0, |m| m as usize + 1);
        let mut out = vec![Rational::zero(); n];
        for (&(a, _), c) in &self.terms {
            out[a as usize] = c.clone();
        }
        out
    }

    fn from_upoly_u(p: &[Rational]) -> PolyUV {
        let mut out = PolyUV::zero();
        for (i, c) in p.iter().enumerate() {
            out.add_term((i as u32, 0), c.clone());
        }
        out
    }

    fn content_v(&self) -> PolyUV {
        let mut g: Vec<Rational> = Vec::new();
        for k in 0..=self.deg_v() {
            g = upoly::gcd(&g, &self.coeff_v(k).to_upoly_u());
        }
        PolyUV::from_upoly_u(&g)
    }

    fn primitive_part(&self) -> PolyUV {
        self.div_exact(&self.content_v()).expect("content divides")
    }

    /// Pseudo-remainder with respect to `v`.
    fn prem(&self, o: &PolyUV) -> PolyUV {
        let dy = o.deg_v();
        let ly = o.coeff_v(dy);
        let mut r = self.clone();
        while !r.is_zero() && r.deg_v() >= dy {
            let dr = r.deg_v();
            let lr = r.coeff_v(dr);
            let shift = PolyUV::monomial(Rational::one(), 0, dr - dy);
            r = r.mul(&ly).sub(&lr.mul(&shift).mul(o));
        }
        r
    }

    /// Greatest common divisor, normalised to leading coefficient 1.
    pub fn gcd(&self, o: &PolyUV) -> PolyUV {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.deg_v() == 0 && o.deg_v() == 0 {
            return PolyUV::from_upoly_u(&upoly::gcd(&self.to_upoly_u(), &o.to_upoly_u()));
        }
        let (ca, cb) = (self.content_v(), o.content_v());
        let (mut x, mut y) = (self.primitive_part(), o.primitive_part());
        if x.deg_v() < y.deg_v() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            if y.deg_v() == 0 {
                x = PolyUV::one();
                break;
            }
            let r = x.prem(&y);
            x = y;
            y = if r.is_zero() { r } else { r.primitive_part() };
        }
        ca.gcd(&cb).mul(&x).monic()
    }
}

impl fmt::Display for PolyUV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(a, b), c)| {
                let mut s = format_rational(c);
                for (x, e) in [("u", a), ("v", b)] {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{x}")),
                        _ => s.push_str(&format!("*{x}^{e}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A quotient of polynomials in lowest terms, denominator with leading
/// coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: PolyUV,
    den: PolyUV,
}

impl RatFunc {
    pub fn new(num: PolyUV, den: PolyUV) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ParameterError("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let (_, lead) = den.lead().unwrap();
        let k = lead.recip();
        Ok(RatFunc {
            num: num.scale(&k),
            den: den.scale(&k),
        })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: PolyUV::zero(),
            den: PolyUV::one(),
        }
    }

    pub fn from_poly(p: PolyUV) -> Self {
        RatFunc {
            num: p,
            den: PolyUV::one(),
        }
    }

    pub fn num(&self) -> &PolyUV {
        &self.num
    }

    pub fn den(&self) -> &PolyUV {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn scale(&self, k: &Rational) -> RatFunc {
        RatFunc::new(self.num.scale(k), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ParameterError("inverting zero".into()));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn swap_uv(&self) -> RatFunc {
        RatFunc::new(self.num.swap_uv(), self.den.swap_uv()).unwrap()
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Result<Rational> {
        let den = self.den.eval(u, v);
        if den.is_zero() {
            return Err(Error::PoleAtEvaluation);
        }
        Ok(self.num.eval(u, v) / den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == PolyUV::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_finds_common_factor() {
        let a = PolyUV::linear(1, -1);
        let b = PolyUV::linear(2, 1);
        let c = PolyUV::linear(1, 3).mul(&PolyUV::u());
        let g = a
            .mul(&b)
            .pow(2)
            .mul(&c)
            .gcd(&a.mul(&c).mul(&PolyUV::linear(5, 7)));
        assert_eq!(g, a.mul(&c).monic());
        assert_eq!(a.gcd(&b), PolyUV::one());
        assert_eq!(
            PolyUV::u()
                .pow(3)
                .gcd(&PolyUV::u().pow(2).mul(&PolyUV::v())),
            PolyUV::u().pow(2)
        );
    }

    #[test]
    fn rational_functions_reduce() {
        let a = PolyUV::linear(1, -1);
        let r = RatFunc::new(a.pow(2).mul(&PolyUV::v()), a.pow(3).scale(&rat(2))).unwrap();
        // v / (2(u - v)) with the denominator normalised to v - u
        assert_eq!(r.den(), &PolyUV::linear(-1, 1));
        assert_eq!(r.num(), &PolyUV::v().scale(&crate::scalar::frac(-1, 2)));
        let s = r.add(&r.neg());
        assert!(s.is_zero());
        let one = r.mul(&r.inv().unwrap());
        assert_eq!(one, RatFunc::from_poly(PolyUV::one()));
        assert_eq!(
            RatFunc::new(PolyUV::one(), a.clone())
                .unwrap()
                .eval(&rat(2), &rat(2)),
            Err(Error::PoleAtEvaluation)
        );
    }

    #[test]
    fn exact_division() {
        let p = PolyUV::linear(3, 1).mul(&PolyUV::linear(1, -4));
        assert_eq!(
            p.div_exact(&PolyUV::linear(1, -4)),
            Some(PolyUV::linear(3, 1))
        );
        assert_eq!(p.div_exact(&PolyUV::linear(1, 1)), None);
    }
}
