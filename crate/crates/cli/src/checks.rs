//! The verification matrix behind `selftest`.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pglcount::bott::{
    bott_verify, closed_form_count, grid_params, porteous_class, porteous_closed_a, ChernPoly,
};
use pglcount::instance::random_subspace_bounded;
use pglcount::numeric::{certify_counts, match_exact, solve_numeric, SolverConfig};
use pglcount::pairing::{dual_params, DualMap};
use pglcount::scalar::{frac, rat};
use pglcount::structured::{
    duality_report, enumerate_solutions, make_structured_instance, random_roots, verify_solutions,
    StructuredInstance,
};
use pglcount::wronskian::{
    check_no_cancellation, is_squarefree, no_cancellation_sides, wronskian_form,
};
use pglcount::{
    act, generate_instance, BinaryForm, CaseTag, P1Point, ProjTransform, Rational, Result, Subspace,
};

use crate::report::Criterion;

/// Pairing used by [`pairing_invariance`]; swappable so a broken pairing can
/// be fed through the same check.
pub type PairFn = dyn Fn(&BinaryForm, &BinaryForm) -> Result<Rational> + Sync;

pub const STRUCTURED_CASES: [(usize, usize); 4] = [(0, 0), (1, 0), (1, 1), (2, 1)];
pub const GENERAL_CASES: [((usize, usize, usize, usize), u64); 4] = [
    ((0, 0, 0, 3), 6),
    ((2, 2, 2, 3), 6),
    ((1, 0, 1, 4), 24),
    ((2, 3, 3, 4), 24),
];
pub const STRUCTURED_BUDGET: f64 = 10.0;
pub const GENERAL_BUDGET: f64 = 60.0;
pub const BOTT_BUDGET: f64 = 60.0;
pub const MATCH_TOL: f64 = 1e-4;
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Coefficient range for the Wronskian samples. With `[-9, 9]` about one
/// sample in a hundred lands on the discriminant.
pub const WRONSKIAN_BOUND: i64 = 1000;

fn timed(id: &str, name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Criterion {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Criterion {
        id: id.into(),
        name: name.into(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn int(n: usize) -> BigInt {
    BigInt::from(n)
}

/// `(1/6)(a+3)(a+2)(a+1)(b+3)(b+2)(b+1)` and `(1/6)ab(a²-1)(b²-1)`, written out.
pub fn explicit_count(case: CaseTag, a: usize, b: usize) -> Rational {
    let n = match case {
        CaseTag::A => {
            (int(a) + 3) * (int(a) + 2) * (int(a) + 1) * (int(b) + 3) * (int(b) + 2) * (int(b) + 1)
        }
        CaseTag::B => int(a) * int(b) * (int(a * a) - 1) * (int(b * b) - 1),
    };
    Rational::new(n, BigInt::from(6))
}

pub fn expected_structured(a: usize, b: usize) -> u64 {
    explicit_count(CaseTag::A, a, b)
        .to_integer()
        .try_into()
        .expect("small count")
}

pub fn closed_forms() -> Criterion {
    timed("1", "closed-form counts", || {
        let example = closed_form_count(1, 0, 1, 4)?;
        let mut bad = Vec::new();
        for case in [CaseTag::A, CaseTag::B] {
            let lo = if case == CaseTag::A { 0 } else { 2 };
            for a in lo..=12 {
                for b in lo..=12 {
                    let (pa, pb, c, d) = grid_params(case, a, b);
                    if closed_form_count(pa, pb, c, d)? != explicit_count(case, a, b) {
                        bad.push((case, a, b));
                    }
                }
            }
        }
        Ok((
            example == rat(24) && bad.is_empty(),
            format!("count 1 0 1 4 = {example}; grid mismatches {bad:?}"),
        ))
    })
}

pub fn structured_instance(a: usize, b: usize, seed: u64) -> Result<StructuredInstance> {
    let (ra, rb) = random_roots(a, b, seed);
    make_structured_instance(a, b, &ra, &rb)
}

pub fn structured_counts(seed: u64) -> Criterion {
    timed("2", "structured enumeration", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (a, b) in STRUCTURED_CASES {
            let start = Instant::now();
            let si = structured_instance(a, b, seed)?;
            let set = enumerate_solutions(&si)?;
            let verified = verify_solutions(&si.instance, &set.solutions)?;
            let mut sorted = set.solutions.clone();
            sorted.sort();
            sorted.dedup();
            let secs = start.elapsed().as_secs_f64();
            let expected = expected_structured(a, b);
            ok &= set.count() as u64 == expected
                && sorted.len() == set.count()
                && verified
                && secs < STRUCTURED_BUDGET;
            parts.push(format!(
                "({a},{b}): {}/{expected} verified={verified} {secs:.2}s",
                set.count()
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// The instances used for the numeric/exact comparison. Their roots are well
/// separated; clustered roots make nearby solutions merge in double precision.
pub fn comparison_instances() -> Result<Vec<StructuredInstance>> {
    Ok(vec![
        make_structured_instance(0, 0, &[rat(0), rat(1), rat(2)], &[rat(3), rat(5), rat(9)])?,
        make_structured_instance(
            1,
            0,
            &[rat(-1), rat(0), rat(1)],
            &[rat(-3), frac(-1, 3), frac(1, 3), rat(3)],
        )?,
    ])
}

pub fn numeric_matches_exact(seed: u64) -> Criterion {
    timed("3", "numeric and exact solution sets agree", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for si in comparison_instances()? {
            let exact = enumerate_solutions(&si)?;
            let run = solve_numeric(&si.instance, &SolverConfig::with_seed(seed))?;
            let m = match_exact(&run.set, &exact.solutions, MATCH_TOL);
            let worst = run
                .set
                .solutions
                .iter()
                .map(|s| s.residual)
                .fold(0.0, f64::max);
            ok &= m.one_to_one && worst < RESIDUAL_TOL;
            parts.push(format!(
                "{:?}: {}/{} one_to_one={} max_distance={:.1e} max_residual={:.1e}",
                si.instance.params(),
                m.numeric,
                m.exact,
                m.one_to_one,
                m.max_distance,
                worst
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn general_counts(seed: u64, repeats: usize) -> Criterion {
    timed("4", "general-instance counts", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for ((a, b, c, d), expected) in GENERAL_CASES {
            let start = Instant::now();
            let inst = generate_instance(a, b, c, d, seed)?;
            let cert = certify_counts(&inst, &SolverConfig::with_seed(seed), repeats)?;
            let secs = start.elapsed().as_secs_f64();
            ok &= cert.stable && cert.count() == Some(expected as usize) && secs < GENERAL_BUDGET;
            parts.push(format!(
                "({a},{b},{c},{d}): {:?} expected {expected} {secs:.1}s",
                cert.counts
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn bott_grids() -> Criterion {
    timed("5", "localization matches closed form", || {
        let start = Instant::now();
        let rows_a = bott_verify(CaseTag::A, 10, 10)?;
        let rows_b = bott_verify(CaseTag::B, 12, 12)?;
        let secs = start.elapsed().as_secs_f64();
        let bad: Vec<_> = rows_a
            .iter()
            .chain(&rows_b)
            .filter(|r| !r.matched)
            .map(|r| (r.a, r.b))
            .collect();
        Ok((
            bad.is_empty() && secs < BOTT_BUDGET,
            format!(
                "{} + {} cells, mismatches {bad:?}, {secs:.1}s",
                rows_a.len(),
                rows_b.len()
            ),
        ))
    })
}

#[derive(Clone, Debug, Default)]
pub struct DualityFindings {
    /// every structured set is carried bijectively by the adjoint onto the dual instance
    pub adjoint: bool,
    pub identity: bool,
    pub adjoint_exchanged: bool,
    pub count_identity: bool,
    pub detail: String,
}

pub fn duality_findings(seed: u64) -> Result<DualityFindings> {
    let mut f = DualityFindings {
        adjoint: true,
        identity: true,
        adjoint_exchanged: true,
        ..Default::default()
    };
    let mut parts = Vec::new();
    for (a, b) in STRUCTURED_CASES {
        let si = structured_instance(a, b, seed)?;
        let set = enumerate_solutions(&si)?;
        let adj = duality_report(&si, &set, DualMap::Adjoint)?;
        let id = duality_report(&si, &set, DualMap::Identity)?;
        let ex = duality_report(&si, &set, DualMap::AdjointExchanged)?;
        f.adjoint &= adj.bijective();
        f.identity &= id.bijective();
        f.adjoint_exchanged &= ex.bijective();
        parts.push(format!(
            "({a},{b}): adjoint {}/{} identity {}/{} exchanged {}/{} bound {} (quoted {})",
            adj.satisfied,
            adj.solutions,
            id.satisfied,
            id.solutions,
            ex.satisfied,
            ex.solutions,
            adj.dual_bound,
            adj.quoted_bound
        ));
    }
    let mut mismatches = Vec::new();
    for case in [CaseTag::A, CaseTag::B] {
        let lo = if case == CaseTag::A { 0 } else { 2 };
        for a in lo..=10 {
            for b in lo..=10 {
                let (pa, pb, c, d) = grid_params(case, a, b);
                let Some((da, db, dc, dd)) = dual_params(pa, pb, c, d) else {
                    mismatches.push((pa, pb, c, d));
                    continue;
                };
                if closed_form_count(pa, pb, c, d)? != closed_form_count(da, db, dc, dd)? {
                    mismatches.push((pa, pb, c, d));
                }
            }
        }
    }
    f.count_identity = mismatches.is_empty();
    parts.push(format!("count duality mismatches {mismatches:?}"));
    f.detail = parts.join("; ");
    Ok(f)
}

pub fn duality(seed: u64) -> Criterion {
    timed("6", "duality", || {
        let f = duality_findings(seed)?;
        Ok((f.adjoint && f.count_identity, f.detail))
    })
}

fn random_form(d: usize, rng: &mut ChaCha8Rng) -> BinaryForm {
    loop {
        let c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
        let f = BinaryForm::from_ints(&c);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> P1Point {
    if rng.gen_ratio(1, 8) {
        P1Point::infinity()
    } else {
        P1Point::affine(frac(rng.gen_range(-12..=12), rng.gen_range(1..=5)))
    }
}

/// A subspace with prescribed orders at `p`: `G_i = l^(α_i) H_i` with `l`
/// vanishing at `p` and `H_i` random.
fn subspace_with_orders(
    d: usize,
    orders: &[usize],
    p: &P1Point,
    rng: &mut ChaCha8Rng,
) -> Option<Subspace> {
    let l = p.vanishing_form();
    let forms: Vec<BinaryForm> = orders
        .iter()
        .map(|&k| l.pow(k).mul(&random_form(d - k, rng)))
        .collect();
    let v = Subspace::from_forms(d, &forms).ok()?;
    (v.dim() == orders.len()).then_some(v)
}

pub fn wronskian_properties(seed: u64) -> Criterion {
    timed("7", "wronskian properties", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut samples, mut degree_ok, mut squarefree) = (0, 0, 0);
        for d in 1..=6 {
            for b in 0..d {
                for _ in 0..100 {
                    let v = random_subspace_bounded(d, b + 1, WRONSKIAN_BOUND, &mut rng);
                    let w = wronskian_form(&v);
                    samples += 1;
                    degree_ok += usize::from(w.degree == (b + 1) * (d - b) && !w.is_zero());
                    squarefree += usize::from(is_squarefree(&w)?);
                }
            }
        }
        let (mut held, mut nontrivial) = (0, 0);
        for _ in 0..50 {
            let d = rng.gen_range(1..=6);
            let b = rng.gen_range(0..d);
            let p = random_point(&mut rng);
            let v = loop {
                let mut orders: Vec<usize> =
                    rand::seq::index::sample(&mut rng, d + 1, b + 1).into_vec();
                orders.sort();
                if let Some(v) = subspace_with_orders(d, &orders, &p, &mut rng) {
                    break v;
                }
            };
            held += usize::from(check_no_cancellation(&v, &p));
            nontrivial += usize::from(no_cancellation_sides(&v, &p).0 > 0);
        }
        Ok((
            degree_ok == samples && squarefree == samples && held == 50,
            format!(
                "{samples} subspaces with coefficients in [-{WRONSKIAN_BOUND}, {WRONSKIAN_BOUND}]: degree {degree_ok}, squarefree {squarefree}; no-cancellation {held}/50 ({nontrivial} with positive order)"
            ),
        ))
    })
}

pub fn porteous() -> Criterion {
    timed("8", "Porteous expansion", || {
        let a = porteous_class(CaseTag::A);
        let b = porteous_class(CaseTag::B);
        let ok = a == porteous_closed_a() && b == ChernPoly::c(3);
        Ok((
            ok,
            format!("case A: {}; case B: {}", show_chern(&a), show_chern(&b)),
        ))
    })
}

fn show_chern(p: &ChernPoly) -> String {
    let terms: Vec<String> = p
        .terms()
        .map(|(e, c)| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("c{}", i + 1)
                    } else {
                        format!("c{}^{k}", i + 1)
                    }
                })
                .collect();
            format!("{c} {}", mono.join(" "))
        })
        .collect();
    terms.join(" + ")
}

/// `pair(act(F,T), act(G,T)) = det(T)^d pair(F,G)` on seeded random data.
pub fn pairing_invariance(seed: u64, pair: &PairFn) -> Criterion {
    timed("P", "pairing invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0;
        let trials = 60;
        for k in 0..trials {
            let d = 1 + k % 6;
            let (f, g) = (random_form(d, &mut rng), random_form(d, &mut rng));
            let t = loop {
                let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-5..=5));
                if let Ok(t) = ProjTransform::from_ints(e) {
                    break t;
                }
            };
            let lhs = pair(&act(&f, &t), &act(&g, &t))?;
            let rhs = t.det().pow(d as i32) * pair(&f, &g)?;
            failures += usize::from(lhs != rhs);
        }
        Ok((failures == 0, format!("{failures}/{trials} violations")))
    })
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub repeats: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 42,
            repeats: 5,
        }
    }
}

/// Every criterion in a fixed order. The timed criteria run one after
/// another so their budgets are measured without contention.
pub fn run_all(cfg: &SelftestConfig, pair: &PairFn) -> Vec<Criterion> {
    vec![
        closed_forms(),
        structured_counts(cfg.seed),
        numeric_matches_exact(cfg.seed),
        general_counts(cfg.seed, cfg.repeats),
        bott_grids(),
        duality(cfg.seed),
        wronskian_properties(cfg.seed),
        porteous(),
        pairing_invariance(cfg.seed, pair),
    ]
}
