//! Structured instances `V = (g)_d` with rational roots, where every solution
//! is a Möbius map sending three roots of `g_a` onto three roots of `g_b`.

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{act_subspace, sum_dim, BinaryForm, Mat2, P1Point, ProjTransform, Subspace};
use crate::instance::Instance;
use crate::pairing::{dual_instance, DualMap};
use crate::scalar::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredInstance {
    pub instance: Instance,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub roots_a: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub roots_b: Vec<Rational>,
    pub g_a: BinaryForm,
    pub g_b: BinaryForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactSolutionSet {
    pub params: (usize, usize, usize, usize),
    pub solutions: Vec<ProjTransform>,
}

impl ExactSolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// `Π (t - r s)`
pub fn root_form(roots: &[Rational]) -> BinaryForm {
    roots.iter().fold(BinaryForm::from_ints(&[1]), |acc, r| {
        acc.mul(&BinaryForm::linear(-r.clone(), Rational::one()))
    })
}

/// `(g)_d`: the degree-`d` multiples of `g`.
pub fn principal_subspace(g: &BinaryForm, d: usize) -> Subspace {
    let k = d - g.degree;
    let forms: Vec<BinaryForm> = (0..=k).map(|i| BinaryForm::monomial(k, i).mul(g)).collect();
    Subspace::from_forms(d, &forms).expect("products have degree d")
}

pub fn make_structured_instance(
    a: usize,
    b: usize,
    roots_a: &[Rational],
    roots_b: &[Rational],
) -> Result<StructuredInstance> {
    let (c, d) = (a + b, a + b + 3);
    if roots_a.len() != d - a || roots_b.len() != d - b {
        return Err(Error::ParameterError(format!(
            "need {} roots for g_a and {} for g_b",
            d - a,
            d - b
        )));
    }
    if roots_a.iter().duplicates().next().is_some() || roots_b.iter().duplicates().next().is_some()
    {
        return Err(Error::DuplicateRoots);
    }
    if !validate_cross_ratios(roots_a, roots_b) {
        return Err(Error::CrossRatioCollision);
    }
    let g_a = root_form(roots_a);
    let g_b = root_form(roots_b);
    let instance = Instance::new(
        a,
        b,
        c,
        d,
        principal_subspace(&g_a, d),
        principal_subspace(&g_b, d),
    )?;
    Ok(StructuredInstance {
        instance,
        roots_a: roots_a.to_vec(),
        roots_b: roots_b.to_vec(),
        g_a,
        g_b,
    })
}

/// `(z1, z2; z3, z4)`
fn cross_ratio(z: [&Rational; 4]) -> Rational {
    ((z[0] - z[2]) * (z[1] - z[3])) / ((z[0] - z[3]) * (z[1] - z[2]))
}

fn orbit(l: &Rational) -> [Rational; 6] {
    let one = Rational::one();
    [
        l.clone(),
        &one - l,
        l.recip(),
        (&one - l).recip(),
        (l - &one) / l,
        l / (l - &one),
    ]
}

fn orbits(roots: &[Rational]) -> Vec<Rational> {
    roots
        .iter()
        .combinations(4)
        .flat_map(|q| orbit(&cross_ratio([q[0], q[1], q[2], q[3]])))
        .sorted()
        .dedup()
        .collect()
}

/// True iff no 4-subset of `roots_a` has a cross-ratio orbit meeting that of a
/// 4-subset of `roots_b`.
pub fn validate_cross_ratios(roots_a: &[Rational], roots_b: &[Rational]) -> bool {
    if roots_a.len() < 4 || roots_b.len() < 4 {
        return true;
    }
    let oa = orbits(roots_a);
    let ob = orbits(roots_b);
    !oa.iter().any(|x| ob.binary_search(x).is_ok())
}

/// Writes `p3 = λ1 p1 + λ2 p2` and returns the matrix with columns `λ1 p1`,
/// `λ2 p2`, which sends `(1:0), (0:1), (1:1)` to `p1, p2, p3`.
fn frame(p: [&P1Point; 3]) -> Result<Mat2> {
    let det = &p[0].s * &p[1].t - &p[1].s * &p[0].t;
    if det.is_zero() {
        return Err(Error::DegenerateTriple);
    }
    let l1 = (&p[2].s * &p[1].t - &p[1].s * &p[2].t) / &det;
    let l2 = (&p[0].s * &p[2].t - &p[2].s * &p[0].t) / &det;
    if l1.is_zero() || l2.is_zero() {
        return Err(Error::DegenerateTriple);
    }
    Ok(Mat2::new(
        &l1 * &p[0].s,
        &l2 * &p[1].s,
        &l1 * &p[0].t,
        &l2 * &p[1].t,
    ))
}

/// The unique transform with `σ(p_i) = q_i`.
pub fn mobius_through(p: [&P1Point; 3], q: [&P1Point; 3]) -> Result<ProjTransform> {
    let fp = frame(p)?;
    let fq = frame(q)?;
    ProjTransform::new(fq.mul(&fp.adjugate()))
}

fn is_solution(inst: &Instance, sigma: &ProjTransform) -> Result<bool> {
    Ok(sum_dim(&inst.va, &act_subspace(&inst.vb, sigma)?)? <= inst.c + 1)
}

/// Every Möbius map carrying a 3-subset of the `g_a` roots onto a 3-subset of
/// the `g_b` roots, each verified by exact rank.
pub fn enumerate_solutions(si: &StructuredInstance) -> Result<ExactSolutionSet> {
    let pa: Vec<P1Point> = si.roots_a.iter().cloned().map(P1Point::affine).collect();
    let pb: Vec<P1Point> = si.roots_b.iter().cloned().map(P1Point::affine).collect();
    let triples_a: Vec<Vec<&P1Point>> = pa.iter().combinations(3).collect();
    let triples_b: Vec<Vec<&P1Point>> = pb.iter().combinations(3).collect();
    let jobs: Vec<(&Vec<&P1Point>, &Vec<&P1Point>, Vec<usize>)> = triples_a
        .iter()
        .cartesian_product(&triples_b)
        .flat_map(|(ta, tb)| (0..3).permutations(3).map(move |perm| (ta, tb, perm)))
        .collect();
    let mut solutions = jobs
        .par_iter()
        .map(|(ta, tb, perm)| {
            let sigma = mobius_through(
                [ta[0], ta[1], ta[2]],
                [tb[perm[0]], tb[perm[1]], tb[perm[2]]],
            )?;
            if !is_solution(&si.instance, &sigma)? {
                return Err(Error::VerificationFailure(format!(
                    "candidate {sigma} fails the rank condition"
                )));
            }
            Ok(sigma)
        })
        .collect::<Result<Vec<_>>>()?;
    solutions.sort();
    let n = solutions.len();
    solutions.dedup();
    if solutions.len() != n {
        return Err(Error::VerificationFailure("two candidates coincide".into()));
    }
    Ok(ExactSolutionSet {
        params: si.instance.params(),
        solutions,
    })
}

/// Checks each transform against `inst` by exact rank.
pub fn verify_solutions(inst: &Instance, solutions: &[ProjTransform]) -> Result<bool> {
    let results: Vec<bool> = solutions
        .par_iter()
        .map(|s| is_solution(inst, s))
        .collect::<Result<_>>()?;
    Ok(results.into_iter().all(|x| x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub solutions: usize,
    /// image solutions satisfying `dim ≤ c' + 1` on the dual instance
    pub satisfied: usize,
    /// images pairwise distinct
    pub injective: bool,
    /// largest `dim(V'_a + V'_b^τ)` over the images
    pub max_dim: usize,
    pub dual_bound: usize,
    pub quoted_bound: usize,
}

impl DualityReport {
    pub fn bijective(&self) -> bool {
        self.injective && self.satisfied == self.solutions
    }
}

/// Pushes every solution through `map` and checks the images on the dual
/// instance. Since the dual count equals the primal count, injectivity plus
/// every image being a solution gives a bijection.
pub fn duality_report(
    si: &StructuredInstance,
    set: &ExactSolutionSet,
    map: DualMap,
) -> Result<DualityReport> {
    let dual = dual_instance(&si.instance)?;
    let dims: Vec<(ProjTransform, usize)> = set
        .solutions
        .par_iter()
        .map(|s| {
            let tau = crate::pairing::dual_image(s, map)?;
            let dim = crate::pairing::dual_sum_dim(&si.instance, s, map)?;
            Ok((tau, dim))
        })
        .collect::<Result<_>>()?;
    let mut images: Vec<&ProjTransform> = dims.iter().map(|(t, _)| t).collect();
    images.sort();
    images.dedup();
    let bound = crate::pairing::dual_bound(&si.instance);
    Ok(DualityReport {
        solutions: set.count(),
        satisfied: dims.iter().filter(|(_, k)| *k <= dual.c + 1).count(),
        injective: images.len() == set.count(),
        max_dim: dims.iter().map(|(_, k)| *k).max().unwrap_or(0),
        dual_bound: bound,
        quoted_bound: crate::pairing::quoted_dual_bound(&si.instance),
    })
}

/// Distinct integer roots for a structured instance, drawn from a seeded
/// generator until the cross-ratio condition holds.
pub fn random_roots(a: usize, b: usize, seed: u64) -> (Vec<Rational>, Vec<Rational>) {
    random_roots_bounded(a, b, 40, seed)
}

/// Like [`random_roots`], with integer roots drawn from `[-bound, bound]`.
pub fn random_roots_bounded(
    a: usize,
    b: usize,
    bound: i64,
    seed: u64,
) -> (Vec<Rational>, Vec<Rational>) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    assert!(
        2 * bound + 1 >= (a + 3).max(b + 3) as i64,
        "root pool too small"
    );
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<i64> = (-bound..=bound).collect();
    loop {
        let draw = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<Rational> {
            let mut v: Vec<i64> = pool.choose_multiple(rng, n).copied().collect();
            v.sort();
            v.into_iter().map(rat).collect()
        };
        let ra = draw(&mut rng, b + 3);
        let rb = draw(&mut rng, a + 3);
        if validate_cross_ratios(&ra, &rb) {
            return (ra, rb);
        }
    }
}

/// Seeded rational roots spread out on the projective line: the points
/// `tan θ` for random angles at least `π / (2n)` apart, `n` the total number
/// of roots, rounded to denominators at most 12. Such instances keep their
/// solutions well separated from each other and from `det = 0`, which
/// matters when they are also solved in floating point.
pub fn spread_roots(a: usize, b: usize, seed: u64) -> (Vec<Rational>, Vec<Rational>) {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = a + b + 6;
    let sep = std::f64::consts::PI / (2 * n) as f64;
    loop {
        let mut angles: Vec<f64> = Vec::with_capacity(n);
        while angles.len() < n {
            let theta = rng.gen_range(
                -std::f64::consts::FRAC_PI_2 + sep / 2.0..std::f64::consts::FRAC_PI_2 - sep / 2.0,
            );
            if angles.iter().all(|&t| (t - theta).abs() >= sep) {
                angles.push(theta);
            }
        }
        let mut roots: Vec<Rational> = angles
            .iter()
            .map(|&t| crate::scalar::frac((t.tan() * 12.0).round() as i64, 12))
            .collect();
        roots.shuffle(&mut rng);
        let mut ra = roots.split_off(a + 3);
        let mut rb = roots;
        ra.sort();
        rb.sort();
        let distinct = ra
            .iter()
            .chain(&rb)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
            == n;
        if distinct && validate_cross_ratios(&ra, &rb) {
            return (ra, rb);
        }
    }
}
