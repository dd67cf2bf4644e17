//! Numerical solving of the rank condition for general instances by
//! total-degree homotopy continuation on the minors of the pairing matrix.

mod cpoly;
mod system;
mod track;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use cpoly::{det_c, det_cpoly, CPoly3};
pub use system::{build_minor_system, PolySystem};

pub use track::{refine, scaled_residual, track_all_with, PathStatus, TrackedPath};

use crate::error::{Error, Result};
use crate::forms::ProjTransform;
use crate::instance::Instance;
use crate::mpoly::QPoly4;
use crate::scalar::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub seed: u64,
    pub residual_tol: f64,
    pub full_tol: f64,
    pub dedup_tol: f64,
    pub quadric_tol: f64,
    pub gap_ratio: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub expand_after: usize,
    pub corrector_iterations: usize,
    pub corrector_tol: f64,
    pub max_first_correction: f64,
    pub endpoint_iterations: usize,
    pub polish_iterations: usize,
    pub divergence_bound: f64,
    /// paths stalling within this distance of `t = 1` still get the endpoint Newton step
    pub end_zone: f64,
    /// distance within which independent runs count as finding the same point
    pub confirm_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            residual_tol: 1e-10,
            full_tol: 1e-8,
            dedup_tol: 1e-4,
            quadric_tol: 1e-6,
            gap_ratio: 1e6,
            initial_step: 0.01,
            min_step: 1e-12,
            max_step: 0.05,
            max_steps: 20_000,
            expand_after: 3,
            corrector_iterations: 3,
            corrector_tol: 1e-6,
            max_first_correction: 0.1,
            endpoint_iterations: 30,
            polish_iterations: 40,
            divergence_bound: 1e7,
            end_zone: 1e-4,
            confirm_tol: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("residual_tol", self.residual_tol),
            ("full_tol", self.full_tol),
            ("dedup_tol", self.dedup_tol),
            ("quadric_tol", self.quadric_tol),
            ("gap_ratio", self.gap_ratio),
            ("initial_step", self.initial_step),
            ("min_step", self.min_step),
            ("max_step", self.max_step),
            ("corrector_tol", self.corrector_tol),
            ("max_first_correction", self.max_first_correction),
            ("divergence_bound", self.divergence_bound),
            ("end_zone", self.end_zone),
            ("confirm_tol", self.confirm_tol),
        ];
        for (name, x) in positive {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::ConfigError(format!(
                    "{name} must be positive, got {x}"
                )));
            }
        }
        if self.max_steps == 0 || self.corrector_iterations == 0 || self.expand_after == 0 {
            return Err(Error::ConfigError(
                "iteration limits must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolution {
    /// `(α, β, γ, δ)` with the first non-negligible entry equal to 1
    pub entries: [Complex64; 4],
    /// largest minor relative to the typical size of a minor
    pub residual: f64,
    /// `|det|` of the unit-norm representative
    pub det: f64,
    /// ratio of the `(c+1)`-th to the `(c+2)`-th singular value of the stacked bases
    pub gap: f64,
    /// condition number of the Jacobian of the reduced minors on the chart
    pub cond: f64,
    pub path: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolutionSet {
    pub solutions: Vec<NumericSolution>,
    /// smallest pairwise projective distance, infinite for fewer than two
    pub min_distance: f64,
    pub seed: u64,
}

impl NumericSolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

#[derive(Clone, Debug)]
pub struct NumericRun {
    pub bezout: u64,
    pub paths: Vec<TrackedPath>,
    pub set: NumericSolutionSet,
}

impl NumericRun {
    pub fn status_count(&self, s: PathStatus) -> usize {
        self.paths.iter().filter(|p| p.status == s).count()
    }
}

pub fn track_all(sys: &PolySystem, cfg: &SolverConfig) -> Result<Vec<TrackedPath>> {
    track_all_with(&sys.equations, sys.gamma, cfg)
}

fn eval_q4(p: &QPoly4, x: &[Complex64; 4]) -> Complex64 {
    p.terms().fold(Complex64::new(0.0, 0.0), |acc, (e, c)| {
        let mut t = Complex64::new(to_f64(c), 0.0);
        for k in 0..4 {
            t *= x[k].powu(e[k]);
        }
        acc + t
    })
}

fn max_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unit(x: &[Complex64; 4]) -> [Complex64; 4] {
    let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    x.map(|z| z / n)
}

/// Scaled so the first entry of modulus at least `1e-8` times the largest is 1.
pub fn canonical_scale(x: &[Complex64; 4]) -> [Complex64; 4] {
    let m = max_norm(x);
    let lead = x
        .iter()
        .find(|z| z.norm() >= 1e-8 * m)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    x.map(|z| z / lead)
}

/// Distance between two points of P³ after scaling both by the largest entry of `a`.
pub fn projective_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let k = (0..4)
        .max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
        .unwrap();
    if b[k].norm() <= 1e-300 {
        return f64::INFINITY;
    }
    (0..4)
        .map(|i| (a[i] / a[k] - b[i] / b[k]).norm())
        .fold(0.0, f64::max)
}

pub fn exact_to_complex(t: &ProjTransform) -> [Complex64; 4] {
    t.matrix()
        .entries()
        .map(|x: &Rational| Complex64::new(to_f64(x), 0.0))
}

/// `max |minor| / S^m` at the unit-norm representative of `x`, where `S` is
/// the typical entry size from [`entry_scale`].
pub fn relative_minor_residual(
    matrix: &[Vec<QPoly4>],
    m: usize,
    x: &[Complex64; 4],
    scale: f64,
) -> f64 {
    use itertools::Itertools;
    let x = unit(x);
    let e: Vec<Vec<Complex64>> = matrix
        .iter()
        .map(|r| r.iter().map(|p| eval_q4(p, &x)).collect())
        .collect();
    let (rows, cols) = (e.len(), e.first().map_or(0, Vec::len));
    let mut worst: f64 = 0.0;
    for ri in (0..rows).combinations(m) {
        for ci in (0..cols).combinations(m) {
            let sub: Vec<Vec<Complex64>> = ri
                .iter()
                .map(|&i| ci.iter().map(|&j| e[i][j]).collect())
                .collect();
            worst = worst.max(det_c(&sub).norm());
        }
    }
    worst / scale.powi(m as i32)
}

/// Largest entry modulus of the pairing matrix, averaged over random
/// unit-norm points of C⁴.
pub fn entry_scale(matrix: &[Vec<QPoly4>], rng: &mut impl Rng) -> f64 {
    let samples = 8;
    let total: f64 = (0..samples)
        .map(|_| {
            let x = unit(&std::array::from_fn(|_| system::random_complex(rng)));
            matrix
                .iter()
                .flatten()
                .map(|p| eval_q4(p, &x).norm())
                .fold(0.0, f64::max)
        })
        .sum();
    (total / samples as f64).max(f64::MIN_POSITIVE)
}

/// Coefficients of `G(αs + βt, γs + δt)` for complex `(α, β, γ, δ)`.
pub fn act_complex(g: &[Rational], x: &[Complex64; 4]) -> Vec<Complex64> {
    let d = g.len() - 1;
    let mul = |p: &[Complex64], q: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    let lx = [x[0], x[1]];
    let ly = [x[2], x[3]];
    let mut xp = vec![vec![Complex64::new(1.0, 0.0)]];
    let mut yp = vec![vec![Complex64::new(1.0, 0.0)]];
    for e in 1..=d {
        xp.push(mul(&xp[e - 1], &lx));
        yp.push(mul(&yp[e - 1], &ly));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
    for (k, c) in g.iter().enumerate() {
        let c = Complex64::new(to_f64(c), 0.0);
        for (j, z) in mul(&xp[d - k], &yp[k]).iter().enumerate() {
            out[j] += c * z;
        }
    }
    out
}

/// Singular values, largest first, of the stacked unit-normalized bases of
/// `V_a` and `V_b^σ`.
pub fn stacked_singular_values(inst: &Instance, x: &[Complex64; 4]) -> Vec<f64> {
    let x = unit(x);
    let mut rows: Vec<Vec<Complex64>> = inst
        .va
        .basis()
        .iter()
        .map(|r| r.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect())
        .collect();
    rows.extend(inst.vb.basis().iter().map(|g| act_complex(g, &x)));
    for r in &mut rows {
        let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            r.iter_mut().for_each(|z| *z /= n);
        }
    }
    let m = DMatrix::from_fn(rows.len(), inst.d + 1, |i, j| rows[i][j]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `s_(c+1) / s_(c+2)`; infinite when the latter vanishes.
pub fn gap_ratio(inst: &Instance, x: &[Complex64; 4]) -> f64 {
    let s = stacked_singular_values(inst, x);
    let (hi, lo) = (
        s.get(inst.c).copied().unwrap_or(0.0),
        s.get(inst.c + 1).copied().unwrap_or(0.0),
    );
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Least-squares Newton on the full minor list.
fn polish(minors: &[CPoly3], y: &[Complex64; 3], iterations: usize) -> [Complex64; 3] {
    let mut y = *y;
    for _ in 0..iterations {
        let evals: Vec<(Complex64, [Complex64; 3])> =
            minors.iter().map(|p| p.eval_grad(&y)).collect();
        let jac = DMatrix::from_fn(evals.len(), 3, |i, j| evals[i].1[j]);
        let rhs = DVector::from_iterator(evals.len(), evals.iter().map(|e| -e.0));
        let Ok(dy) = jac.svd(true, true).solve(&rhs, 1e-14) else {
            break;
        };
        if !dy.iter().all(|z| z.is_finite()) {
            break;
        }
        for i in 0..3 {
            y[i] += dy[i];
        }
        if max_norm(dy.as_slice()) < 1e-15 * (1.0 + max_norm(&y)) {
            break;
        }
    }
    y
}

/// Keeps converged endpoints that solve every minor, lie off the quadric
/// `det = 0` and are not duplicates, sorted by entries.
pub fn filter_solutions(
    paths: &[TrackedPath],
    sys: &PolySystem,
    inst: &Instance,
    cfg: &SolverConfig,
) -> NumericSolutionSet {
    let mut kept: Vec<(NumericSolution, [Complex64; 4])> = Vec::new();
    for p in paths.iter().filter(|p| p.status == PathStatus::Converged) {
        let y = polish(&sys.minors, &p.point, cfg.polish_iterations);
        let x = sys.point(&y);
        if let Some(s) = accept(inst, sys, &y, p.index, cfg) {
            if kept
                .iter()
                .all(|(_, k)| projective_distance(k, &x) > cfg.dedup_tol)
            {
                kept.push((s, x));
            }
        }
    }
    finish(kept.into_iter().map(|(s, _)| s).collect(), cfg.seed)
}

/// `s_max / s_min` of the Jacobian of `minors` at `y`; infinite when singular.
pub fn jacobian_condition(minors: &[CPoly3], y: &[Complex64; 3]) -> f64 {
    let rows: Vec<[Complex64; 3]> = minors.iter().map(|p| p.eval_grad(y).1).collect();
    let jac = DMatrix::from_fn(rows.len(), 3, |i, j| rows[i][j]);
    let s = jac.singular_values();
    let (hi, lo) = (s.max(), s.min());
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Chart coordinates `y` with `x ∝ base + Σ y_i dirs[i]`, if `x` is not at
/// infinity on the chart.
pub fn chart_coords(sys: &PolySystem, x: &[Complex64; 4]) -> Option<[Complex64; 3]> {
    let m = DMatrix::from_fn(4, 4, |i, j| if j == 0 { x[i] } else { -sys.dirs[j - 1][i] });
    let sol = m.lu().solve(&DVector::from_column_slice(&sys.base))?;
    (sol[0].norm() > 1e-300).then(|| [sol[1], sol[2], sol[3]])
}

/// The tests applied to one candidate point, given by chart coordinates;
/// `None` if it is rejected.
pub fn accept(
    inst: &Instance,
    sys: &PolySystem,
    y: &[Complex64; 3],
    path: usize,
    cfg: &SolverConfig,
) -> Option<NumericSolution> {
    let x = sys.point(y);
    let residual = relative_minor_residual(&sys.matrix, sys.minor_size, &x, sys.entry_scale);
    let u = unit(&x);
    let det = (u[0] * u[3] - u[1] * u[2]).norm();
    if !(residual < cfg.full_tol) || !(det > cfg.quadric_tol) {
        return None;
    }
    let gap = gap_ratio(inst, &x);
    if !(gap > cfg.gap_ratio) {
        return None;
    }
    let cond = jacobian_condition(&sys.minors, y);
    Some(NumericSolution {
        entries: canonical_scale(&x),
        residual,
        det,
        gap,
        cond,
        path,
    })
}

fn finish(mut solutions: Vec<NumericSolution>, seed: u64) -> NumericSolutionSet {
    solutions.sort_by(|a, b| {
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut min_distance = f64::INFINITY;
    for (i, a) in solutions.iter().enumerate() {
        for b in &solutions[i + 1..] {
            min_distance = min_distance.min(projective_distance(&a.entries, &b.entries));
        }
    }
    NumericSolutionSet {
        solutions,
        min_distance,
        seed,
    }
}

/// Builds the randomized system, tracks every path and filters the endpoints.
pub fn solve_numeric(inst: &Instance, cfg: &SolverConfig) -> Result<NumericRun> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sys = build_minor_system(inst, &mut rng)?;
    let paths = track_all(&sys, cfg)?;
    let set = filter_solutions(&paths, &sys, inst, cfg);
    Ok(NumericRun {
        bezout: sys.bezout_number(),
        paths,
        set,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCertificate {
    pub seeds: Vec<u64>,
    pub counts: Vec<usize>,
    pub stable: bool,
}

impl CountCertificate {
    pub fn count(&self) -> Option<usize> {
        if self.stable {
            self.counts.first().copied()
        } else {
            None
        }
    }
}

/// Independent randomizations derived from `cfg.seed`.
pub fn repeat_seeds(seed: u64, repeats: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..repeats).map(|_| rng.gen()).collect()
}

/// Runs the whole pipeline `repeats` times and reports whether the counts agree.
pub fn certify_counts(
    inst: &Instance,
    cfg: &SolverConfig,
    repeats: usize,
) -> Result<CountCertificate> {
    let seeds = repeat_seeds(cfg.seed, repeats);
    let counts = seeds
        .iter()
        .map(|&s| {
            solve_numeric(
                inst,
                &SolverConfig {
                    seed: s,
                    ..cfg.clone()
                },
            )
            .map(|r| r.set.count())
        })
        .collect::<Result<Vec<_>>>()?;
    let stable = counts.windows(2).all(|w| w[0] == w[1]);
    Ok(CountCertificate {
        seeds,
        counts,
        stable,
    })
}

/// Solutions found, within `tol`, by at least two of the independent runs
/// `sets`. Endpoints on an excess component land at different places under
/// different randomizations, isolated solutions do not.
pub fn confirm_across(sets: &[NumericSolutionSet], tol: f64, seed: u64) -> NumericSolutionSet {
    let mut kept: Vec<NumericSolution> = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        for s in &set.solutions {
            let seen_elsewhere = sets.iter().enumerate().any(|(j, other)| {
                j != i
                    && other
                        .solutions
                        .iter()
                        .any(|o| projective_distance(&s.entries, &o.entries) <= tol)
            });
            if !seen_elsewhere {
                continue;
            }
            match kept
                .iter_mut()
                .find(|k| projective_distance(&k.entries, &s.entries) <= tol)
            {
                Some(k) if s.residual < k.residual => *k = s.clone(),
                Some(_) => {}
                None => kept.push(s.clone()),
            }
        }
    }
    finish(kept, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub exact: usize,
    pub numeric: usize,
    /// every exact solution has exactly one numeric solution within tolerance
    /// and vice versa
    pub one_to_one: bool,
    pub max_distance: f64,
}

pub fn match_exact(set: &NumericSolutionSet, exact: &[ProjTransform], tol: f64) -> MatchReport {
    let ex: Vec<[Complex64; 4]> = exact.iter().map(exact_to_complex).collect();
    let close = |a: &[Complex64; 4], b: &[Complex64; 4]| projective_distance(a, b) <= tol;
    let mut one_to_one = ex.len() == set.count();
    let mut max_distance: f64 = 0.0;
    for e in &ex {
        let hits: Vec<&NumericSolution> = set
            .solutions
            .iter()
            .filter(|s| close(e, &s.entries))
            .collect();
        one_to_one &= hits.len() == 1;
        let best = set
            .solutions
            .iter()
            .map(|s| projective_distance(e, &s.entries))
            .fold(f64::INFINITY, f64::min);
        max_distance = max_distance.max(best);
    }
    for s in &set.solutions {
        one_to_one &= ex.iter().filter(|e| close(e, &s.entries)).count() == 1;
    }
    MatchReport {
        exact: ex.len(),
        numeric: set.count(),
        one_to_one,
        max_distance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_instance;

    #[test]
    fn system_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ((a, b, c, d), deg) in [
            ((0, 0, 0, 3), 3),
            ((1, 0, 1, 4), 4),
            ((2, 2, 2, 3), 3),
            ((2, 3, 3, 4), 6),
        ] {
            let inst = generate_instance(a, b, c, d, 7).unwrap();
            let sys = build_minor_system(&inst, &mut rng).unwrap();
            assert_eq!(sys.equations.len(), 3);
            assert_eq!(sys.degrees, vec![deg; 3]);
            assert_eq!(sys.bezout_number(), (deg as u64).pow(3));
        }
    }

    #[test]
    fn quadric_points_rejected_and_duplicates_merged() {
        let inst = generate_instance(0, 0, 0, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sys = build_minor_system(&inst, &mut rng).unwrap();
        let cfg = SolverConfig::default();
        // a rank-one matrix sending everything to a root of the V_b generator
        // makes every entry vanish, but it lies on the quadric
        let g = &inst.vb.basis()[0];
        let roots = crate::wronskian::numeric_roots(&crate::forms::BinaryForm::new(g.clone()))
            .unwrap()
            .0;
        let r = roots[0];
        let one = Complex64::new(1.0, 0.0);
        let x = [
            one,
            Complex64::new(0.3, 0.1),
            r,
            r * Complex64::new(0.3, 0.1),
        ];
        assert!(relative_minor_residual(&sys.matrix, 1, &x, sys.entry_scale) < 1e-8);
        let y = chart_coords(&sys, &x).unwrap();
        assert!(projective_distance(&x, &sys.point(&y)) < 1e-12);
        assert!(accept(&inst, &sys, &y, 0, &cfg).is_none());
        let a = [
            one,
            Complex64::new(2.0, 1.0),
            Complex64::new(-1.0, 0.5),
            one,
        ];
        let mut b = a;
        b[1] += Complex64::new(1e-12, 0.0);
        assert!(projective_distance(&a, &b) < cfg.dedup_tol);
    }

    #[test]
    fn confirmation_keeps_points_seen_twice() {
        let point = |x: f64| NumericSolution {
            entries: [
                Complex64::new(1.0, 0.0),
                Complex64::new(x, 0.0),
                Complex64::new(0.5, -1.0),
                Complex64::new(2.0, 0.0),
            ],
            residual: x.abs() * 1e-12,
            det: 1.0,
            gap: 1e12,
            cond: 1.0,
            path: 0,
        };
        let set = |xs: &[f64]| finish(xs.iter().map(|&x| point(x)).collect(), 0);
        let sets = [
            set(&[1.0, 2.0, 3.0]),
            set(&[1.0 + 1e-9, 2.0, 7.0]),
            set(&[3.0, 8.0]),
        ];
        let kept = confirm_across(&sets, 1e-6, 0);
        let xs: Vec<f64> = kept.solutions.iter().map(|s| s.entries[1].re).collect();
        assert_eq!(xs, vec![1.0, 2.0, 3.0]);
        assert!(confirm_across(&sets[..1], 1e-6, 0).solutions.is_empty());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.residual_tol = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::ConfigError(_))));
    }

    #[test]
    fn smallest_general_instance() {
        let inst = generate_instance(0, 0, 0, 3, 11).unwrap();
        let run = solve_numeric(&inst, &SolverConfig::with_seed(5)).unwrap();
        assert_eq!(run.paths.len(), 27);
        assert_eq!(run.set.count(), 6);
        for s in &run.set.solutions {
            assert!(s.gap > 1e6);
        }
    }
}
