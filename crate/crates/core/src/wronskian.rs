//! Wronskian-type determinants of a subspace, orders of vanishing and the
//! squarefreeness checks behind the genericity statements.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{act_matrix, BinaryForm, Mat2, P1Point, Subspace};
use crate::scalar::{to_f64, Rational};
use crate::upoly::{derivative, gcd, trim};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSequence {
    pub point: P1Point,
    pub orders: Vec<usize>,
}

/// Determinant of the matrix `(∂^b G_i / ∂s^(b-j) ∂t^j)` for the echelon basis
/// `G_0, …, G_b` of `v`, scaled so its first nonzero coefficient is 1.
/// It has degree `(b+1)(d-b)`.
pub fn wronskian_form(v: &Subspace) -> BinaryForm {
    wronskian_of(&v.basis_forms()).canonical()
}

/// The same determinant for an arbitrary list of forms, unscaled.
pub fn wronskian_of(forms: &[BinaryForm]) -> BinaryForm {
    let b = forms.len() - 1;
    let matrix: Vec<Vec<BinaryForm>> = forms
        .iter()
        .map(|g| (0..=b).map(|j| partial(g, b - j, j)).collect())
        .collect();
    det_forms(&matrix)
}

/// The matrix `(∂^j G_i / ∂t^j)` whose determinant equals `s^(b(b+1)/2)` times
/// `wronskian_of` up to a nonzero scalar.
pub fn t_wronskian_of(forms: &[BinaryForm]) -> BinaryForm {
    let b = forms.len() - 1;
    let matrix: Vec<Vec<BinaryForm>> = forms
        .iter()
        .map(|g| (0..=b).map(|j| partial(g, 0, j)).collect())
        .collect();
    det_forms(&matrix)
}

fn partial(g: &BinaryForm, ks: usize, kt: usize) -> BinaryForm {
    let mut out = g.clone();
    for _ in 0..ks {
        out = out.d_ds();
    }
    for _ in 0..kt {
        out = out.d_dt();
    }
    out
}

/// Laplace expansion along rows, memoised on the set of used columns.
/// Entries in one column share a degree, so each partial sum is homogeneous.
fn det_forms(m: &[Vec<BinaryForm>]) -> BinaryForm {
    let n = m.len();
    let mut dp: Vec<Option<BinaryForm>> = vec![None; 1 << n];
    dp[0] = Some(BinaryForm::from_ints(&[1]));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].clone() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            // sign: number of used columns after `col`
            let after = (mask >> (col + 1)).count_ones();
            let mut term = cur.mul(&m[row][col]);
            if after % 2 == 1 {
                term = term.scale(&-Rational::one());
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                None => term,
                Some(acc) => acc.add(&term).expect("summands share a degree"),
            });
        }
    }
    dp[(1 << n) - 1].take().unwrap()
}

/// Multiplicity of `p` as a root of `f`.
pub fn order_at(f: &BinaryForm, p: &P1Point) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let l = p.vanishing_form();
    let mut cur = f.clone();
    let mut k = 0;
    while cur.degree > 0 {
        match cur.div_linear(&l) {
            Some(q) => {
                cur = q;
                k += 1;
            }
            None => break,
        }
    }
    Ok(k)
}

/// Orders at `p` of a basis of `v` adapted to `p`; strictly increasing.
pub fn order_sequence(v: &Subspace, p: &P1Point) -> OrderSequence {
    // move p to (1:0), where the order of a form is the index of its first
    // nonzero coefficient; the echelon pivots are then the distinct orders
    let q = if p.s.is_zero() {
        (Rational::one(), Rational::zero())
    } else {
        (Rational::zero(), Rational::one())
    };
    let m = Mat2::new(p.s.clone(), q.0, p.t.clone(), q.1);
    let moved: Vec<BinaryForm> = v.basis_forms().iter().map(|g| act_matrix(g, &m)).collect();
    let sub = Subspace::from_forms(v.degree(), &moved).expect("forms have degree d");
    OrderSequence {
        point: p.clone(),
        orders: sub.pivots(),
    }
}

/// Compares `ord_p(wronskian)` with `Σ (α_i - i)` for the order sequence at `p`.
/// Returns both sides.
pub fn no_cancellation_sides(v: &Subspace, p: &P1Point) -> (usize, usize) {
    let w = wronskian_form(v);
    let lhs = order_at(&w, p).expect("the wronskian is never zero");
    let rhs = order_sequence(v, p)
        .orders
        .iter()
        .enumerate()
        .map(|(i, a)| a - i)
        .sum();
    (lhs, rhs)
}

pub fn check_no_cancellation(v: &Subspace, p: &P1Point) -> bool {
    let (l, r) = no_cancellation_sides(v, p);
    l == r
}

/// True iff `f` has no repeated root on P¹.
pub fn is_squarefree(f: &BinaryForm) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    // f(x) = F(1, x), ascending in x; the drop in degree is the order at (0:1)
    let mut poly = f.coeffs.clone();
    trim(&mut poly);
    let at_infinity = f.degree + 1 - poly.len();
    if at_infinity > 1 {
        return Ok(false);
    }
    let g = gcd(&poly, &derivative(&poly));
    Ok(g.len() <= 1)
}

/// Roots `(1 : x)` of `f` as complex numbers `x`, plus the multiplicity of
/// `(0 : 1)`. Floating point, for diagnostics only.
pub fn numeric_roots(f: &BinaryForm) -> Result<(Vec<Complex64>, usize)> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut poly = f.coeffs.clone();
    trim(&mut poly);
    let at_infinity = f.degree + 1 - poly.len();
    let n = poly.len() - 1;
    if n == 0 {
        return Ok((Vec::new(), at_infinity));
    }
    let lead = to_f64(&poly[n]);
    let companion = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -to_f64(&poly[i]) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok((roots, at_infinity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_subspace;
    use crate::scalar::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tail_space(b: usize, d: usize) -> Subspace {
        let forms: Vec<BinaryForm> = (d - b..=d).map(|i| BinaryForm::monomial(d, i)).collect();
        Subspace::from_forms(d, &forms).unwrap()
    }

    #[test]
    fn wronskian_of_tail_space_is_power_of_t() {
        for d in 1..7 {
            for b in 0..d {
                let w = wronskian_form(&tail_space(b, d));
                let k = (b + 1) * (d - b);
                assert_eq!(w, BinaryForm::monomial(k, k));
            }
        }
    }

    #[test]
    fn wronskian_of_full_space_is_one() {
        for d in 0..6 {
            assert_eq!(
                wronskian_form(&Subspace::full(d)),
                BinaryForm::from_ints(&[1])
            );
        }
    }

    #[test]
    fn random_pencil_of_cubics_has_squarefree_quartic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_subspace(3, 2, &mut rng);
        let w = wronskian_form(&v);
        assert_eq!(w.degree, 4);
        assert!(is_squarefree(&w).unwrap());
    }

    #[test]
    fn order_examples() {
        let inf = P1Point::new(rat(1), rat(0)).unwrap();
        assert_eq!(order_at(&BinaryForm::monomial(5, 5), &inf).unwrap(), 5);
        assert_eq!(order_at(&BinaryForm::monomial(5, 0), &inf).unwrap(), 0);
        // (s - t)^2 (s + t)
        let f = BinaryForm::from_ints(&[1, -1])
            .pow(2)
            .mul(&BinaryForm::from_ints(&[1, 1]));
        assert_eq!(order_at(&f, &P1Point::affine(rat(1))).unwrap(), 2);
        assert_eq!(order_at(&f, &P1Point::affine(rat(-1))).unwrap(), 1);
        assert_eq!(order_at(&BinaryForm::zero(3), &inf), Err(Error::ZeroForm));
    }

    #[test]
    fn order_sequence_of_tail_space() {
        let inf = P1Point::new(rat(1), rat(0)).unwrap();
        let seq = order_sequence(&tail_space(2, 6), &inf);
        assert_eq!(seq.orders, vec![4, 5, 6]);
        assert!(check_no_cancellation(&tail_space(2, 6), &inf));
        assert_eq!(no_cancellation_sides(&tail_space(2, 6), &inf), (12, 12));
    }

    #[test]
    fn generic_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let v = random_subspace(5, 3, &mut rng);
        let p = P1Point::affine(rat(7) / rat(3));
        assert_eq!(order_sequence(&v, &p).orders, vec![0, 1, 2]);
        assert_eq!(no_cancellation_sides(&v, &p), (0, 0));
    }

    #[test]
    fn orders_at_a_wronskian_root() {
        // V = <G_0, G_1, (t - 2s)^(b+1) H>: (1:2) is a simple root of the wronskian
        let (b, d) = (2, 5);
        let p = P1Point::affine(rat(2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rest = random_subspace(d, b, &mut rng);
        let h = BinaryForm::from_ints(&[1, 3]).mul(&BinaryForm::from_ints(&[1, 1]));
        let special = p.vanishing_form().pow(b + 1).mul(&h);
        let mut forms = rest.basis_forms();
        forms.push(special);
        let v = Subspace::from_forms(d, &forms).unwrap();
        let w = wronskian_form(&v);
        assert_eq!(order_at(&w, &p).unwrap(), 1);
        assert_eq!(order_sequence(&v, &p).orders, vec![0, 1, 3]);
        assert!(check_no_cancellation(&v, &p));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&BinaryForm::from_ints(&[0, 1, 0])).unwrap());
        assert!(!is_squarefree(&BinaryForm::monomial(5, 2)).unwrap());
        assert!(!is_squarefree(&BinaryForm::monomial(5, 0)).unwrap());
        assert!(is_squarefree(&BinaryForm::from_ints(&[1, 0, -1])).unwrap());
        assert!(!is_squarefree(&BinaryForm::from_ints(&[1, -2, 1])).unwrap());
        assert!(is_squarefree(&BinaryForm::from_ints(&[5])).unwrap());
        assert_eq!(is_squarefree(&BinaryForm::zero(2)), Err(Error::ZeroForm));
    }

    #[test]
    fn t_wronskian_is_multiple_of_s_power_times_wronskian() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (b, d) in [(1, 3), (2, 4), (2, 6), (3, 5)] {
            let v = random_subspace(d, b + 1, &mut rng);
            let forms = v.basis_forms();
            let lhs = t_wronskian_of(&forms).canonical();
            let k = b * (b + 1) / 2;
            let rhs = BinaryForm::monomial(k, 0)
                .mul(&wronskian_of(&forms))
                .canonical();
            assert_eq!(lhs, rhs, "b = {b}, d = {d}");
        }
    }

    #[test]
    fn numeric_roots_of_product() {
        // s (s - t) (2s - t): roots (0:1), (1:1), (1:2)
        let f = BinaryForm::from_ints(&[1, 0])
            .mul(&BinaryForm::from_ints(&[1, -1]))
            .mul(&BinaryForm::from_ints(&[2, -1]));
        let (roots, inf) = numeric_roots(&f).unwrap();
        assert_eq!(inf, 1);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
