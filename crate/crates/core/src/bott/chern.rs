//! Equivariant classes modulo `h²` and polynomials in abstract Chern classes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{PolyUV, RatFunc};
use crate::error::{Error, Result};
use crate::scalar::{binomial, format_rational, rat, Rational};

fn fmt_coeff(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format_rational(x)
    }
}

/// `A + B h` in `Q(u,v)[h]/(h²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivClass {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl EquivClass {
    pub fn new(a: RatFunc, b: RatFunc) -> Self {
        EquivClass { a, b }
    }

    pub fn from_poly(p: PolyUV) -> Self {
        EquivClass {
            a: RatFunc::from_poly(p),
            b: RatFunc::zero(),
        }
    }

    pub fn polys(a: PolyUV, b: PolyUV) -> Self {
        EquivClass {
            a: RatFunc::from_poly(a),
            b: RatFunc::from_poly(b),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(PolyUV::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(PolyUV::one())
    }

    pub fn add(&self, o: &EquivClass) -> EquivClass {
        EquivClass {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
        }
    }

    pub fn scale(&self, k: &Rational) -> EquivClass {
        EquivClass {
            a: self.a.scale(k),
            b: self.b.scale(k),
        }
    }

    pub fn mul(&self, o: &EquivClass) -> EquivClass {
        EquivClass {
            a: self.a.mul(&o.a),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
        }
    }

    /// `(A + Bh)⁻¹ = A⁻¹ - A⁻² B h`
    pub fn inv(&self) -> Result<EquivClass> {
        if self.a.is_zero() {
            return Err(Error::ParameterError("h-free part is zero".into()));
        }
        let ai = self.a.inv()?;
        Ok(EquivClass {
            b: ai.mul(&ai).mul(&self.b).neg(),
            a: ai,
        })
    }

    pub fn h_coeff(&self) -> &RatFunc {
        &self.b
    }

    pub fn swap_uv(&self) -> EquivClass {
        EquivClass {
            a: self.a.swap_uv(),
            b: self.b.swap_uv(),
        }
    }
}

/// `ς_k(values)`; `ς_0 = 1` and `ς_k = 0` for `k` beyond the length.
pub fn elementary_symmetric(k: usize, values: &[PolyUV]) -> PolyUV {
    let mut e = vec![PolyUV::zero(); k + 1];
    e[0] = PolyUV::one();
    for x in values {
        for j in (1..=k).rev() {
            e[j] = e[j].add(&e[j - 1].mul(x));
        }
    }
    e.swap_remove(k)
}

/// `c_k` of a sum of equivariant line bundles with trivial ordinary classes
/// and the given characters.
pub fn equivariant_chern(k: usize, characters: &[PolyUV]) -> EquivClass {
    EquivClass::from_poly(elementary_symmetric(k, characters))
}

/// `c_i^T(E_χ) = Σ_(j ≤ i) C(r-j, i-j) c_j(E_χ) χ^(i-j)` for an eigenbundle of
/// rank `r` with ordinary classes `ordinary[j]` (`ordinary[0] = 1`).
pub fn eigenbundle_chern(
    i: usize,
    rank: usize,
    ordinary: &[EquivClass],
    chi: &PolyUV,
) -> EquivClass {
    let mut out = EquivClass::zero();
    for j in 0..=i.min(rank) {
        let Some(cj) = ordinary.get(j) else { break };
        let k = Rational::from_integer(binomial(rank - j, i - j));
        let term = cj
            .mul(&EquivClass::from_poly(chi.pow((i - j) as u32)))
            .scale(&k);
        out = out.add(&term);
    }
    out
}

/// Total class of a direct sum, from the total classes `[c_0, c_1, …]` of the
/// summands, truncated after `c_top`.
pub fn whitney(parts: &[Vec<EquivClass>], top: usize) -> Vec<EquivClass> {
    let mut total = vec![EquivClass::zero(); top + 1];
    total[0] = EquivClass::one();
    for p in parts {
        let mut next = vec![EquivClass::zero(); top + 1];
        for (i, x) in total.iter().enumerate() {
            for (j, y) in p.iter().enumerate() {
                if i + j <= top {
                    next[i + j] = next[i + j].add(&x.mul(y));
                }
            }
        }
        total = next;
    }
    total
}

/// Polynomial in `c1, c2, c3` (weights 1, 2, 3), truncated above weight 3.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChernPoly {
    terms: BTreeMap<[u32; 3], Rational>,
}

const TOP: u32 = 3;

fn weight(e: &[u32; 3]) -> u32 {
    e[0] + 2 * e[1] + 3 * e[2]
}

impl ChernPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term([0; 3], Rational::one());
        p
    }

    /// `c_i`; `c_0 = 1` and `c_i = 0` for `i` outside `0..=3`.
    pub fn c(i: i64) -> Self {
        match i {
            0 => Self::one(),
            1..=3 => {
                let mut e = [0; 3];
                e[i as usize - 1] = 1;
                let mut p = Self::zero();
                p.add_term(e, Rational::one());
                p
            }
            _ => Self::zero(),
        }
    }

    fn add_term(&mut self, e: [u32; 3], c: Rational) {
        if c.is_zero() || weight(&e) > TOP {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &ChernPoly) -> ChernPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> ChernPoly {
        let mut out = ChernPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * k);
        }
        out
    }

    pub fn sub(&self, o: &ChernPoly) -> ChernPoly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn mul(&self, o: &ChernPoly) -> ChernPoly {
        let mut out = ChernPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }

    /// The weight-`k` part.
    pub fn graded_part(&self, k: u32) -> ChernPoly {
        ChernPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| weight(e) == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Substitutes equivariant classes for `c1, c2, c3`.
    pub fn eval(&self, c: &[EquivClass; 3]) -> EquivClass {
        self.terms.iter().fold(EquivClass::zero(), |acc, (e, k)| {
            let mut t = EquivClass::one().scale(k);
            for (ci, &n) in c.iter().zip(e) {
                for _ in 0..n {
                    t = t.mul(ci);
                }
            }
            acc.add(&t)
        })
    }
}

impl fmt::Display for ChernPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono: Vec<String> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => mono.push(format!("c{}", i + 1)),
                    _ => mono.push(format!("c{}^{}", i + 1, k)),
                }
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let coef = if mag.is_one() && !mono.is_empty() {
                String::new()
            } else {
                fmt_coeff(&mag)
            };
            let body = match (coef.is_empty(), mono.is_empty()) {
                (true, _) => mono.join("*"),
                (false, true) => coef,
                (false, false) => format!("{coef}*{}", mono.join("*")),
            };
            match (n, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        write!(f, "{out}")
    }
}

/// Determinant of a square matrix of Chern polynomials by cofactor expansion.
pub fn chern_det(m: &[Vec<ChernPoly>]) -> ChernPoly {
    let n = m.len();
    if n == 0 {
        return ChernPoly::one();
    }
    let mut out = ChernPoly::zero();
    for col in 0..n {
        let minor: Vec<Vec<ChernPoly>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&chern_det(&minor));
        out = if col % 2 == 0 {
            out.add(&term)
        } else {
            out.sub(&term)
        };
    }
    out
}
