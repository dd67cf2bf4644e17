//! Dense univariate polynomials over Q, ascending coefficients; zero is empty.

use num_traits::Zero;

use crate::scalar::Rational;

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn derivative(p: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lead = b.last().expect("division by the zero polynomial");
    while r.len() >= b.len() {
        let k = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &k * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd.
pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= &lead;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn gcd_of_products() {
        // (x - 1)(x + 2) and (x - 1)(x - 3)
        let g = gcd(&p(&[-2, 1, 1]), &p(&[3, -4, 1]));
        assert_eq!(g, p(&[-1, 1]));
        assert_eq!(gcd(&p(&[2]), &p(&[0, 1])), p(&[1]));
        assert_eq!(gcd(&p(&[0, 0, 3]), &[]), p(&[0, 0, 1]));
        assert_eq!(derivative(&p(&[5, 3, 1])), p(&[3, 2]));
        assert!(rem(&p(&[-1, 0, 1]), &p(&[1, 1])).is_empty());
        assert_eq!(gcd(&p(&[1, 1]), &p(&[2, 1])), p(&[1]));
    }
}
