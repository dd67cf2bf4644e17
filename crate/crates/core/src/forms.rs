//! Binary forms, PGL(2) transforms and subspaces of `C[s,t]_d`, all exact.
//!
//! A form of degree `d` is stored as `coeffs[i]` = coefficient of `s^(d-i) t^i`.
//! A 2×2 matrix `((α, β), (γ, δ))` acts on forms by the substitution
//! `(s, t) -> (αs + βt, γs + δt)`. With this convention
//! `act(F, T1·T2) = act(act(F, T1), T2)` (a right action), and the matrix
//! `S = sym_power_matrix(T, d)` satisfies `coeffs(act(F, T)) = coeffs(F) · S`,
//! so `S(T1·T2) = S(T1) · S(T2)`. On points of P¹, `T` acts by `x -> T x` and
//! the roots of `act(G, T)` are the preimages under `T` of the roots of `G`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_exact, rref, vec_mat, QMatrix};
use crate::scalar::{binomial, format_rational, parse_rational, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryForm {
    pub degree: usize,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a binary form needs degree + 1 coefficients"
        );
        BinaryForm {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    /// `s^(d-i) t^i`
    pub fn monomial(degree: usize, i: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[i] = Rational::one();
        f
    }

    /// The linear form `p·s + q·t`.
    pub fn linear(p: Rational, q: Rational) -> Self {
        BinaryForm {
            degree: 1,
            coeffs: vec![p, q],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &Rational) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        (0..e).fold(BinaryForm::from_ints(&[1]), |acc, _| acc.mul(self))
    }

    /// ∂/∂s; the derivative of a degree-0 form is the zero form of degree 0.
    pub fn d_ds(&self) -> BinaryForm {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let d = self.degree;
        BinaryForm {
            degree: d - 1,
            coeffs: (0..d)
                .map(|i| &self.coeffs[i] * rat((d - i) as i64))
                .collect(),
        }
    }

    /// ∂/∂t
    pub fn d_dt(&self) -> BinaryForm {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let d = self.degree;
        BinaryForm {
            degree: d - 1,
            coeffs: (0..d)
                .map(|i| &self.coeffs[i + 1] * rat((i + 1) as i64))
                .collect(),
        }
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        let d = self.degree;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, c)| {
                acc + c * num_traits::pow(s.clone(), d - i) * num_traits::pow(t.clone(), i)
            })
    }

    /// Scaled so the first nonzero coefficient is 1 (the zero form is unchanged).
    pub fn canonical(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }

    /// Exact division by a nonzero linear form; `None` if it does not divide.
    pub fn div_linear(&self, l: &BinaryForm) -> Option<BinaryForm> {
        assert_eq!(l.degree, 1);
        if self.degree == 0 {
            return if self.is_zero() {
                Some(self.clone())
            } else {
                None
            };
        }
        let (p, q) = (&l.coeffs[0], &l.coeffs[1]);
        let d = self.degree;
        let mut out = vec![Rational::zero(); d];
        if !p.is_zero() {
            // peel off from the s^d end
            let mut rem = self.coeffs.clone();
            for i in 0..d {
                out[i] = &rem[i] / p;
                rem[i + 1] -= &out[i] * q;
            }
            if !rem[d].is_zero() {
                return None;
            }
        } else {
            // l = q t
            if !self.coeffs[0].is_zero() {
                return None;
            }
            for i in 0..d {
                out[i] = &self.coeffs[i + 1] / q;
            }
        }
        Some(BinaryForm {
            degree: d - 1,
            coeffs: out,
        })
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*s^{}*t^{}", d - i, i))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A raw 2×2 matrix `((alpha, beta), (gamma, delta))`, not reduced modulo scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl Mat2 {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, delta: Rational) -> Self {
        Mat2 {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn from_ints(e: [i64; 4]) -> Self {
        Mat2::new(rat(e[0]), rat(e[1]), rat(e[2]), rat(e[3]))
    }

    pub fn identity() -> Self {
        Mat2::from_ints([1, 0, 0, 1])
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }

    pub fn det(&self) -> Rational {
        &self.alpha * &self.delta - &self.beta * &self.gamma
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.alpha * &o.alpha + &self.beta * &o.gamma,
            &self.alpha * &o.beta + &self.beta * &o.delta,
            &self.gamma * &o.alpha + &self.delta * &o.gamma,
            &self.gamma * &o.beta + &self.delta * &o.delta,
        )
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(
            self.delta.clone(),
            -self.beta.clone(),
            -self.gamma.clone(),
            self.alpha.clone(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Mat2 {
        Mat2::new(
            &self.alpha * k,
            &self.beta * k,
            &self.gamma * k,
            &self.delta * k,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|x| x.is_zero())
    }

    pub fn apply(&self, p: &P1Point) -> (Rational, Rational) {
        (
            &self.alpha * &p.s + &self.beta * &p.t,
            &self.gamma * &p.s + &self.delta * &p.t,
        )
    }
}

/// An element of PGL(2) (or a point of P³ when singular), stored with its
/// first nonzero entry equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjTransform(Mat2);

impl ProjTransform {
    pub fn new(m: Mat2) -> Result<Self> {
        let lead = m
            .entries()
            .into_iter()
            .find(|x| !x.is_zero())
            .cloned()
            .ok_or_else(|| Error::ParameterError("all four entries are zero".into()))?;
        Ok(ProjTransform(m.scale(&lead.recip())))
    }

    pub fn from_ints(e: [i64; 4]) -> Result<Self> {
        Self::new(Mat2::from_ints(e))
    }

    pub fn identity() -> Self {
        ProjTransform(Mat2::identity())
    }

    /// `s <-> t`
    pub fn swap() -> Self {
        ProjTransform(Mat2::from_ints([0, 1, 1, 0]))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn det(&self) -> Rational {
        self.0.det()
    }

    pub fn is_singular(&self) -> bool {
        self.det().is_zero()
    }

    pub fn compose(&self, other: &ProjTransform) -> ProjTransform {
        ProjTransform::new(self.0.mul(&other.0))
            .expect("product of invertible-or-not matrices is nonzero")
    }

    pub fn inverse(&self) -> Result<ProjTransform> {
        if self.is_singular() {
            return Err(Error::SingularTransform);
        }
        ProjTransform::new(self.0.adjugate())
    }

    pub fn apply(&self, p: &P1Point) -> Result<P1Point> {
        let (s, t) = self.0.apply(p);
        P1Point::new(s, t)
    }

    pub fn to_strings(&self) -> [String; 4] {
        self.0.entries().map(format_rational)
    }

    pub fn from_strings(e: &[String]) -> Result<Self> {
        if e.len() != 4 {
            return Err(Error::Parse(
                "a transform needs exactly four entries".into(),
            ));
        }
        let v: Vec<Rational> = e.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        let [a, b, c, d]: [Rational; 4] = v.try_into().unwrap();
        Self::new(Mat2::new(a, b, c, d))
    }
}

impl Ord for ProjTransform {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.entries().cmp(&other.0.entries())
    }
}

impl PartialOrd for ProjTransform {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for ProjTransform {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjTransform {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        ProjTransform::from_strings(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0.entries();
        write!(f, "(({a}, {b}), ({c}, {d}))")
    }
}

/// A point `(s : t)` of P¹, first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1Point {
    #[serde(with = "crate::scalar::serde_rational")]
    pub s: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub t: Rational,
}

impl P1Point {
    pub fn new(s: Rational, t: Rational) -> Result<Self> {
        if !s.is_zero() {
            Ok(P1Point {
                t: t / &s,
                s: Rational::one(),
            })
        } else if !t.is_zero() {
            Ok(P1Point {
                s: Rational::zero(),
                t: Rational::one(),
            })
        } else {
            Err(Error::ParameterError("(0:0) is not a point of P^1".into()))
        }
    }

    /// The point `(1 : z)`, i.e. the root of `t - z s`.
    pub fn affine(z: Rational) -> Self {
        P1Point {
            s: Rational::one(),
            t: z,
        }
    }

    pub fn infinity() -> Self {
        P1Point {
            s: Rational::zero(),
            t: Rational::one(),
        }
    }

    /// A linear form vanishing exactly at this point: `t̄ s - s̄ t`.
    pub fn vanishing_form(&self) -> BinaryForm {
        BinaryForm::linear(self.t.clone(), -self.s.clone())
    }
}

/// Matrix `S` with `S[i][j]` = coefficient of `s^(d-j) t^j` in
/// `(αs+βt)^(d-i) (γs+δt)^i`.
pub fn sym_power_matrix(m: &Mat2, d: usize) -> QMatrix {
    let x = BinaryForm::linear(m.alpha.clone(), m.beta.clone());
    let y = BinaryForm::linear(m.gamma.clone(), m.delta.clone());
    let xp: Vec<BinaryForm> = (0..=d).map(|e| x.pow(e)).collect();
    let yp: Vec<BinaryForm> = (0..=d).map(|e| y.pow(e)).collect();
    (0..=d).map(|i| xp[d - i].mul(&yp[i]).coeffs).collect()
}

/// `F(αs + βt, γs + δt)` for a fixed matrix representative.
pub fn act_matrix(f: &BinaryForm, m: &Mat2) -> BinaryForm {
    let s = sym_power_matrix(m, f.degree);
    BinaryForm {
        degree: f.degree,
        coeffs: vec_mat(&f.coeffs, &s),
    }
}

pub fn act(f: &BinaryForm, t: &ProjTransform) -> BinaryForm {
    act_matrix(f, t.matrix())
}

/// A subspace of `C[s,t]_d`, stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr")]
pub struct Subspace {
    degree: usize,
    #[serde(with = "crate::scalar::serde_rational_matrix")]
    basis: QMatrix,
}

#[derive(Deserialize)]
struct SubspaceRepr {
    degree: usize,
    #[serde(with = "crate::scalar::serde_rational_matrix")]
    basis: QMatrix,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::spanned_by(r.degree, &r.basis)
    }
}

impl Subspace {
    /// Span of the given coefficient rows (dependent rows are allowed).
    pub fn spanned_by(degree: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != degree + 1) {
            return Err(Error::DegreeMismatch(degree, r.len().saturating_sub(1)));
        }
        let (basis, _) = rref(rows);
        Ok(Subspace { degree, basis })
    }

    pub fn from_forms(degree: usize, forms: &[BinaryForm]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = forms
            .iter()
            .map(|f| {
                if f.degree != degree {
                    Err(Error::DegreeMismatch(degree, f.degree))
                } else {
                    Ok(f.coeffs.clone())
                }
            })
            .collect::<Result<_>>()?;
        Self::spanned_by(degree, &rows)
    }

    pub fn zero(degree: usize) -> Self {
        Subspace {
            degree,
            basis: vec![],
        }
    }

    pub fn full(degree: usize) -> Self {
        Subspace {
            degree,
            basis: crate::linalg::identity(degree + 1),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_forms(&self) -> Vec<BinaryForm> {
        self.basis
            .iter()
            .map(|r| BinaryForm::new(r.clone()))
            .collect()
    }

    pub fn contains(&self, f: &BinaryForm) -> bool {
        if f.degree != self.degree {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(f.coeffs.clone());
        rank_exact(&rows) == self.dim()
    }

    /// Pivot columns of the echelon basis; for a subspace these are the
    /// distinct orders of vanishing at `(1:0)`.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }
}

pub fn act_subspace(v: &Subspace, t: &ProjTransform) -> Result<Subspace> {
    if t.is_singular() {
        return Err(Error::SingularTransform);
    }
    let s = sym_power_matrix(t.matrix(), v.degree);
    let rows: QMatrix = v.basis.iter().map(|r| vec_mat(r, &s)).collect();
    Subspace::spanned_by(v.degree, &rows)
}

/// `dim(V + W)`
pub fn sum_dim(v: &Subspace, w: &Subspace) -> Result<usize> {
    if v.degree != w.degree {
        return Err(Error::DegreeMismatch(v.degree, w.degree));
    }
    let rows: QMatrix = v.basis.iter().chain(&w.basis).cloned().collect();
    Ok(rank_exact(&rows))
}

/// Binomial coefficient as an exact rational, used by the pairing.
pub(crate) fn binom_q(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, mat_mul};

    fn q(rows: &[&[i64]]) -> QMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn sym_power_identity_and_swap() {
        assert_eq!(sym_power_matrix(&Mat2::identity(), 3), identity(4));
        assert_eq!(
            sym_power_matrix(ProjTransform::swap().matrix(), 2),
            q(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
    }

    #[test]
    fn sym_power_binomial_rows() {
        // s -> s + t, t -> t
        let m = Mat2::from_ints([1, 1, 0, 1]);
        assert_eq!(
            sym_power_matrix(&m, 2),
            q(&[&[1, 2, 1], &[0, 1, 1], &[0, 0, 1]])
        );
        // the transposed substitution t -> s + t gives s² -> s², st -> s²+st,
        // t² -> s²+2st+t²
        let mt = Mat2::from_ints([1, 0, 1, 1]);
        assert_eq!(
            sym_power_matrix(&mt, 2),
            q(&[&[1, 0, 0], &[1, 1, 0], &[1, 2, 1]])
        );
    }

    #[test]
    fn act_examples() {
        let sd = BinaryForm::monomial(4, 0);
        assert_eq!(act(&sd, &ProjTransform::identity()), sd);
        assert_eq!(act(&sd, &ProjTransform::swap()), BinaryForm::monomial(4, 4));
        let st = BinaryForm::from_ints(&[0, 1, 0]);
        let upper = ProjTransform::from_ints([1, 1, 0, 1]).unwrap();
        assert_eq!(act(&st, &upper), BinaryForm::from_ints(&[0, 1, 1]));
        let lower = ProjTransform::from_ints([1, 0, 1, 1]).unwrap();
        assert_eq!(act(&st, &lower), BinaryForm::from_ints(&[1, 1, 0]));
    }

    #[test]
    fn composition_order_is_a_right_action() {
        let f = BinaryForm::from_ints(&[3, -1, 0, 2]);
        let t1 = Mat2::from_ints([1, 2, 0, 1]);
        let t2 = Mat2::from_ints([2, 0, 1, -1]);
        assert_eq!(
            act_matrix(&f, &t1.mul(&t2)),
            act_matrix(&act_matrix(&f, &t1), &t2)
        );
        assert_eq!(
            sym_power_matrix(&t1.mul(&t2), 3),
            mat_mul(&sym_power_matrix(&t1, 3), &sym_power_matrix(&t2, 3))
        );
    }

    #[test]
    fn act_subspace_examples() {
        let v = Subspace::from_forms(3, &[BinaryForm::monomial(3, 0), BinaryForm::monomial(3, 1)])
            .unwrap();
        let w = act_subspace(&v, &ProjTransform::swap()).unwrap();
        let expect =
            Subspace::from_forms(3, &[BinaryForm::monomial(3, 3), BinaryForm::monomial(3, 2)])
                .unwrap();
        assert_eq!(w, expect);
        assert_eq!(act_subspace(&v, &ProjTransform::identity()).unwrap(), v);
        let singular = ProjTransform::from_ints([1, 2, 2, 4]).unwrap();
        assert_eq!(act_subspace(&v, &singular), Err(Error::SingularTransform));
    }

    #[test]
    fn rank_and_sum_dim_examples() {
        let m = q(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(rank_exact(&m), 3);
        let v = Subspace::from_forms(3, &[BinaryForm::monomial(3, 0), BinaryForm::monomial(3, 3)])
            .unwrap();
        let w = Subspace::from_forms(3, &[BinaryForm::from_ints(&[1, 0, 0, 1])]).unwrap();
        assert_eq!(sum_dim(&v, &w).unwrap(), 2);
        assert_eq!(sum_dim(&v, &v).unwrap(), 2);
        let comp =
            Subspace::from_forms(3, &[BinaryForm::monomial(3, 1), BinaryForm::monomial(3, 2)])
                .unwrap();
        assert_eq!(sum_dim(&v, &comp).unwrap(), 4);
        assert_eq!(
            sum_dim(&v, &Subspace::zero(2)),
            Err(Error::DegreeMismatch(3, 2))
        );
    }

    #[test]
    fn linear_division() {
        // (s - t)^2 (s + t)
        let l1 = BinaryForm::linear(rat(1), rat(-1));
        let l2 = BinaryForm::linear(rat(1), rat(1));
        let f = l1.mul(&l1).mul(&l2);
        assert_eq!(f.div_linear(&l1).unwrap(), l1.mul(&l2));
        assert!(f.div_linear(&BinaryForm::linear(rat(0), rat(1))).is_none());
        let tt = BinaryForm::from_ints(&[0, 0, 1]);
        assert_eq!(
            tt.div_linear(&BinaryForm::linear(rat(0), rat(1))).unwrap(),
            BinaryForm::from_ints(&[0, 1])
        );
    }

    #[test]
    fn transform_canonical_scale() {
        let t = ProjTransform::new(Mat2::from_ints([0, 2, 4, 6])).unwrap();
        assert_eq!(t, ProjTransform::from_ints([0, 1, 2, 3]).unwrap());
        assert!(ProjTransform::from_ints([0, 0, 0, 0]).is_err());
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"["0/1","1/1","2/1","3/1"]"#);
        let back: ProjTransform = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn subspace_json_is_canonicalised() {
        let json = r#"{"degree":2,"basis":[["2","4","0"],["0","1","1"]]}"#;
        let v: Subspace = serde_json::from_str(json).unwrap();
        assert_eq!(v.basis()[0], vec![rat(1), rat(0), rat(-2)]);
        assert_eq!(v.dim(), 2);
    }
}
