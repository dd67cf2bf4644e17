//! The invariant pairing on `C[s,t]_d`, orthogonal complements, adjoints and
//! the duality between instances.
//!
//! `pair(F, G) = Σ_i p_i q_(d-i) (-1)^i / C(d, i)`. It satisfies
//! `pair(act(F,T), act(G,T)) = det(T)^d pair(F, G)`, so orthogonal complements
//! commute with the action: `(V^T)^⊥ = (V^⊥)^T`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{
    act_matrix, act_subspace, binom_q, sum_dim, BinaryForm, Mat2, ProjTransform, Subspace,
};
use crate::instance::Instance;
use crate::linalg::{nullspace, QMatrix};
use crate::mpoly::QPoly4;
use crate::scalar::Rational;

pub fn pair(f: &BinaryForm, g: &BinaryForm) -> Result<Rational> {
    if f.degree != g.degree {
        return Err(Error::DegreeMismatch(f.degree, g.degree));
    }
    Ok(pair_coeffs(&f.coeffs, &g.coeffs))
}

fn pair_coeffs(p: &[Rational], q: &[Rational]) -> Rational {
    let d = p.len() - 1;
    (0..=d).fold(Rational::zero(), |acc, i| {
        let term = &p[i] * &q[d - i] / binom_q(d, i);
        if i % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// The vector `w` with `pair(F, H) = Σ_k w[k] H[k]` for fixed `F`.
pub fn pairing_functional(f: &[Rational]) -> Vec<Rational> {
    let d = f.len() - 1;
    let mut w = vec![Rational::zero(); d + 1];
    for (i, p) in f.iter().enumerate() {
        let v = p / binom_q(d, i);
        w[d - i] = if i % 2 == 0 { v } else { -v };
    }
    w
}

/// `{F : pair(F, G) = 0 for all G in V}`
pub fn orthogonal(v: &Subspace) -> Subspace {
    let d = v.degree();
    // pair(F, G) is symmetric up to sign ((-1)^d), so the functional of G
    // annihilates F iff pair(F, G) = 0.
    let rows: QMatrix = v.basis().iter().map(|g| pairing_functional(g)).collect();
    let ns = nullspace(&rows, d + 1);
    Subspace::spanned_by(d, &ns).expect("nullspace vectors have length d + 1")
}

/// The transform `T'` with `pair(act(F,T), G) = λ pair(F, act(G,T'))`. This is
/// the adjugate (the inverse in PGL(2)); the identity is checked in debug builds.
pub fn adjoint(t: &ProjTransform) -> Result<ProjTransform> {
    if t.is_singular() {
        return Err(Error::SingularTransform);
    }
    let adj = ProjTransform::new(t.matrix().adjugate())?;
    debug_assert!(certify_adjoint(t.matrix(), adj.matrix(), 2).is_some());
    Ok(adj)
}

/// Finds the scalar `λ` with `pair(act(F,T), G) = λ pair(F, act(G,T'))` for
/// every pair of degree-`d` monomials, or `None` if no single `λ` works.
pub fn certify_adjoint(t: &Mat2, t_adj: &Mat2, d: usize) -> Option<Rational> {
    let mut lambda: Option<Rational> = None;
    for i in 0..=d {
        for j in 0..=d {
            let f = BinaryForm::monomial(d, i);
            let g = BinaryForm::monomial(d, j);
            let lhs = pair_coeffs(&act_matrix(&f, t).coeffs, &g.coeffs);
            let rhs = pair_coeffs(&f.coeffs, &act_matrix(&g, t_adj).coeffs);
            match (&lambda, rhs.is_zero()) {
                (_, true) if !lhs.is_zero() => return None,
                (_, true) => {}
                (None, false) => lambda = Some(lhs / rhs),
                (Some(l), false) => {
                    if &lhs != &(l * &rhs) {
                        return None;
                    }
                }
            }
        }
    }
    lambda.filter(|l| !l.is_zero())
}

/// `(a, b, c, d) -> (d - a - 1, d - b - 1, d - a - b + c - 1, d)`; `None` when a
/// component would be negative.
pub fn dual_params(a: usize, b: usize, c: usize, d: usize) -> Option<(usize, usize, usize, usize)> {
    let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
    let out = (d - a - 1, d - b - 1, d - a - b + c - 1, d);
    if out.0 < 0 || out.1 < 0 || out.2 < 0 {
        return None;
    }
    Some((
        out.0 as usize,
        out.1 as usize,
        out.2 as usize,
        out.3 as usize,
    ))
}

pub fn dual_instance(inst: &Instance) -> Result<Instance> {
    let (a, b, c, d) = dual_params(inst.a, inst.b, inst.c, inst.d)
        .ok_or_else(|| Error::ParameterError("dual parameters are negative".into()))?;
    Instance::new(a, b, c, d, orthogonal(&inst.va), orthogonal(&inst.vb))
}

/// Which transform of the dual instance a solution `σ` is sent to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualMap {
    /// `σ -> σ`; correct because `(V^σ)^⊥ = (V^⊥)^σ`.
    Identity,
    /// `σ -> adjoint(σ)`
    Adjoint,
    /// `σ -> adjoint(σ)` with the roles of the two orthogonals exchanged,
    /// i.e. `dim(V_b^⊥ + (V_a^⊥)^τ)`
    AdjointExchanged,
}

/// The transform of the dual instance that `map` assigns to `sigma`.
pub fn dual_image(sigma: &ProjTransform, map: DualMap) -> Result<ProjTransform> {
    match map {
        DualMap::Identity => Ok(sigma.clone()),
        DualMap::Adjoint | DualMap::AdjointExchanged => adjoint(sigma),
    }
}

/// `dim(V_a^⊥ + (V_b^⊥)^τ)` where `τ` is the image of `σ` under `map`.
pub fn dual_sum_dim(inst: &Instance, sigma: &ProjTransform, map: DualMap) -> Result<usize> {
    let tau = dual_image(sigma, map)?;
    let (fixed, moved) = match map {
        DualMap::AdjointExchanged => (&inst.vb, &inst.va),
        _ => (&inst.va, &inst.vb),
    };
    let moved = act_subspace(&orthogonal(moved), &tau)?;
    sum_dim(&orthogonal(fixed), &moved)
}

/// The dual threshold `c' + 1 = d - a - b + c` given by linear algebra.
pub fn dual_bound(inst: &Instance) -> usize {
    inst.d + inst.c - inst.a - inst.b
}

/// The bound `d - c - 1` sometimes quoted for the dual side of the correspondence.
pub fn quoted_dual_bound(inst: &Instance) -> usize {
    inst.d - inst.c - 1
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairingMatrix {
    /// Entries are degree-`d` polynomials in `(α, β, γ, δ)`.
    Symbolic(Vec<Vec<QPoly4>>),
    Evaluated(QMatrix),
}

pub enum PairingMode<'a> {
    Symbolic,
    Evaluated(&'a Mat2),
}

impl PairingMatrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            PairingMatrix::Symbolic(m) => (m.len(), m.first().map_or(0, Vec::len)),
            PairingMatrix::Evaluated(m) => (m.len(), m.first().map_or(0, Vec::len)),
        }
    }
}

/// Entries `pair(L_i, act(G_j, σ))` where `L_i` runs over the echelon basis of
/// `V_a^⊥` and `G_j` over the basis of `V_b`. Shape `(d - a) × (b + 1)`.
pub fn build_pairing_matrix(inst: &Instance, mode: PairingMode<'_>) -> PairingMatrix {
    let perp = orthogonal(&inst.va);
    let weights: Vec<Vec<Rational>> = perp.basis().iter().map(|l| pairing_functional(l)).collect();
    match mode {
        PairingMode::Evaluated(m) => {
            let images: Vec<BinaryForm> = inst
                .vb
                .basis_forms()
                .iter()
                .map(|g| act_matrix(g, m))
                .collect();
            PairingMatrix::Evaluated(
                weights
                    .iter()
                    .map(|w| images.iter().map(|h| dot(w, &h.coeffs)).collect())
                    .collect(),
            )
        }
        PairingMode::Symbolic => {
            let images = symbolic_images(&inst.vb, inst.d);
            PairingMatrix::Symbolic(
                weights
                    .iter()
                    .map(|w| {
                        images
                            .iter()
                            .map(|h| {
                                w.iter()
                                    .zip(h)
                                    .fold(QPoly4::zero(), |acc, (x, p)| acc.add(&p.scale(x)))
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Coefficients of `G(αs + βt, γs + δt)` as polynomials in the matrix entries,
/// one vector per basis form of `v`.
pub(crate) fn symbolic_images(v: &Subspace, d: usize) -> Vec<Vec<QPoly4>> {
    // (αs+βt)^(d-k) (γs+δt)^k, as a vector of monomial coefficients in s,t
    let lin = |p: QPoly4, q: QPoly4| vec![p, q];
    let x = lin(QPoly4::var(0), QPoly4::var(1));
    let y = lin(QPoly4::var(2), QPoly4::var(3));
    let one = vec![QPoly4::constant(Rational::one())];
    let mul = |f: &Vec<QPoly4>, g: &Vec<QPoly4>| {
        let mut out = vec![QPoly4::zero(); f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        out
    };
    let mut xp = vec![one.clone()];
    let mut yp = vec![one];
    for e in 1..=d {
        xp.push(mul(&xp[e - 1], &x));
        yp.push(mul(&yp[e - 1], &y));
    }
    let rows: Vec<Vec<QPoly4>> = (0..=d).map(|k| mul(&xp[d - k], &yp[k])).collect();
    v.basis()
        .iter()
        .map(|g| {
            (0..=d)
                .map(|j| {
                    g.iter()
                        .zip(&rows)
                        .fold(QPoly4::zero(), |acc, (c, row)| acc.add(&row[j].scale(c)))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_instance;
    use crate::scalar::rat;

    #[test]
    fn pair_examples() {
        for d in 1..6 {
            let sd = BinaryForm::monomial(d, 0);
            let td = BinaryForm::monomial(d, d);
            assert_eq!(pair(&sd, &td).unwrap(), rat(1));
            assert_eq!(pair(&sd, &sd).unwrap(), rat(0));
        }
        // degree 1: the determinant
        let f = BinaryForm::from_ints(&[3, 5]);
        let g = BinaryForm::from_ints(&[-2, 7]);
        assert_eq!(pair(&f, &g).unwrap(), rat(3 * 7 - 5 * -2));
        assert!(pair(&f, &BinaryForm::monomial(2, 0)).is_err());
    }

    #[test]
    fn orthogonal_examples() {
        assert_eq!(orthogonal(&Subspace::full(4)).dim(), 0);
        assert_eq!(orthogonal(&Subspace::zero(4)), Subspace::full(4));
        // pair(F, s^d) only sees the t^d coefficient of F
        let d = 4;
        let v = Subspace::from_forms(d, &[BinaryForm::monomial(d, 0)]).unwrap();
        let expect: Vec<BinaryForm> = (0..d).map(|i| BinaryForm::monomial(d, i)).collect();
        assert_eq!(orthogonal(&v), Subspace::from_forms(d, &expect).unwrap());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(
            adjoint(&ProjTransform::identity()).unwrap(),
            ProjTransform::identity()
        );
        let t = ProjTransform::from_ints([2, 3, -1, 5]).unwrap();
        assert_eq!(adjoint(&adjoint(&t).unwrap()).unwrap(), t);
        assert_eq!(
            adjoint(&ProjTransform::from_ints([1, 1, 1, 1]).unwrap()),
            Err(Error::SingularTransform)
        );
        // T = diag(2, 1), d = 1, F = s, G = t: act(s, T) = 2s and pair(2s, t) = 2;
        // the adjugate diag(1, 2) gives act(t, adj) = 2t and pair(s, 2t) = 2, so λ = 1
        let m = Mat2::from_ints([2, 0, 0, 1]);
        let adj = m.adjugate();
        assert_eq!(adj, Mat2::from_ints([1, 0, 0, 2]));
        let (f, g) = (BinaryForm::monomial(1, 0), BinaryForm::monomial(1, 1));
        assert_eq!(pair(&act_matrix(&f, &m), &g).unwrap(), rat(2));
        assert_eq!(pair(&f, &act_matrix(&g, &adj)).unwrap(), rat(2));
        assert_eq!(certify_adjoint(&m, &adj, 1), Some(rat(1)));
        let t = ProjTransform::new(m).unwrap();
        assert_eq!(adjoint(&t).unwrap(), ProjTransform::new(adj).unwrap());
    }

    #[test]
    fn dual_instance_examples() {
        assert_eq!(dual_params(0, 0, 0, 3), Some((2, 2, 2, 3)));
        assert_eq!(dual_params(1, 0, 1, 4), Some((2, 3, 3, 4)));
        let inst = generate_instance(1, 0, 1, 4, 3).unwrap();
        let dual = dual_instance(&inst).unwrap();
        assert_eq!(dual.params(), (2, 3, 3, 4));
        assert_eq!(dual.case, inst.case.dual());
        assert_eq!(dual_instance(&dual).unwrap(), inst);
    }

    #[test]
    fn pairing_matrix_shapes_and_degrees() {
        let inst = generate_instance(1, 0, 1, 4, 11).unwrap();
        let sym = build_pairing_matrix(&inst, PairingMode::Symbolic);
        assert_eq!(sym.shape(), (3, 1));
        let PairingMatrix::Symbolic(rows) = &sym else {
            unreachable!()
        };
        for p in rows.iter().flatten() {
            assert_eq!(p.total_degree(), Some(4));
            assert!(p.is_homogeneous());
        }
        // evaluating the symbolic matrix agrees with the evaluated mode
        let m = Mat2::from_ints([2, -1, 3, 1]);
        let PairingMatrix::Evaluated(ev) = build_pairing_matrix(&inst, PairingMode::Evaluated(&m))
        else {
            unreachable!()
        };
        for (r, er) in rows.iter().zip(&ev) {
            for (p, e) in r.iter().zip(er) {
                assert_eq!(&p.eval(&m), e);
            }
        }
    }

    #[test]
    fn pairing_matrix_vanishes_when_vb_inside_va() {
        let d = 4;
        let va = Subspace::from_forms(d, &[BinaryForm::monomial(d, 0), BinaryForm::monomial(d, 2)])
            .unwrap();
        let vb = Subspace::from_forms(d, &[BinaryForm::monomial(d, 2)]).unwrap();
        let inst = Instance::new(1, 0, 1, 4, va, vb).unwrap();
        let PairingMatrix::Evaluated(m) =
            build_pairing_matrix(&inst, PairingMode::Evaluated(&Mat2::identity()))
        else {
            unreachable!()
        };
        assert_eq!(m.len(), 3);
        assert!(m.iter().flatten().all(Zero::is_zero));
    }
}
