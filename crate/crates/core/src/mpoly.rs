//! Sparse exact polynomials in the four matrix entries `(α, β, γ, δ)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::forms::Mat2;
use crate::scalar::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPoly4 {
    terms: BTreeMap<[u32; 4], Rational>,
}

impl QPoly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; 4], c);
        p
    }

    /// The coordinate function with index `i` (0 = α, …, 3 = δ).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    fn add_term(&mut self, e: [u32; 4], c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &QPoly4) -> QPoly4 {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> QPoly4 {
        let mut out = QPoly4::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * k);
        }
        out
    }

    pub fn mul(&self, o: &QPoly4) -> QPoly4 {
        let mut out = QPoly4::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> QPoly4 {
        (0..n).fold(QPoly4::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            Some(first) => degs.all(|d| d == first),
            None => true,
        }
    }

    pub fn sub(&self, o: &QPoly4) -> QPoly4 {
        self.add(&o.scale(&-Rational::one()))
    }

    /// `αδ - βγ`
    pub fn det() -> QPoly4 {
        QPoly4::var(0)
            .mul(&QPoly4::var(3))
            .sub(&QPoly4::var(1).mul(&QPoly4::var(2)))
    }

    /// `self / o` when the division is exact (lexicographic division).
    pub fn div_exact(&self, o: &QPoly4) -> Option<QPoly4> {
        let (lo, lc) = o.terms.iter().next_back()?;
        let mut r = self.clone();
        let mut q = QPoly4::zero();
        while let Some((le, c)) = r.terms.iter().next_back() {
            if (0..4).any(|i| le[i] < lo[i]) {
                return None;
            }
            let mut t = QPoly4::zero();
            t.add_term(std::array::from_fn(|i| le[i] - lo[i]), c / lc);
            r = r.sub(&t.mul(o));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn eval(&self, m: &Mat2) -> Rational {
        let vals = m.entries();
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for (v, &k) in vals.iter().zip(e) {
                t *= num_traits::pow((*v).clone(), k as usize);
            }
            acc + t
        })
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn det_q4(m: &[Vec<QPoly4>]) -> QPoly4 {
    let n = m.len();
    if n == 0 {
        return QPoly4::constant(Rational::one());
    }
    (0..n).fold(QPoly4::zero(), |acc, col| {
        let minor: Vec<Vec<QPoly4>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&det_q4(&minor));
        if col % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        }
    })
}
