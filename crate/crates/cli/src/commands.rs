use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};

use pglcount::bott::{bott_verify, closed_form_count};
use pglcount::numeric::{confirm_across, match_exact, solve_numeric, PathStatus, SolverConfig};
use pglcount::pairing::{dual_instance, dual_params, DualMap};
use pglcount::scalar::{format_rational, parse_rational};
use pglcount::structured::{
    duality_report, enumerate_solutions, make_structured_instance, random_roots, spread_roots,
    verify_solutions, StructuredInstance,
};
use pglcount::wronskian::{is_squarefree, wronskian_form};
use pglcount::{generate_instance, CaseTag, Error, Instance, Rational, Result, Subspace};

use crate::checks::{self, PairFn, SelftestConfig};
use crate::report::RunReport;

fn to_u64(x: &Rational) -> Result<u64> {
    if !x.is_integer() {
        return Err(Error::VerificationFailure(format!(
            "count {x} is not an integer"
        )));
    }
    x.to_integer()
        .try_into()
        .map_err(|_| Error::ParameterError(format!("count {x} does not fit in 64 bits")))
}

pub fn parse_roots(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|r| parse_rational(r.trim())).collect()
}

fn roots_json(r: &[Rational]) -> Value {
    r.iter().map(format_rational).collect()
}

fn complex_json(x: &[Complex64]) -> Value {
    x.iter()
        .map(|z| json!([z.re.to_string(), z.im.to_string()]))
        .collect()
}

/// A structured instance with explicit roots, or seeded random roots when
/// either list is missing: spread out on the projective line if `spread`,
/// integers otherwise.
pub fn structured_from(
    a: usize,
    b: usize,
    roots: Option<(&str, &str)>,
    spread: bool,
    seed: u64,
) -> Result<StructuredInstance> {
    let (ra, rb) = match roots {
        Some((ra, rb)) => (parse_roots(ra)?, parse_roots(rb)?),
        None if spread => spread_roots(a, b, seed),
        None => random_roots(a, b, seed),
    };
    make_structured_instance(a, b, &ra, &rb)
}

pub fn count(a: usize, b: usize, c: usize, d: usize) -> Result<RunReport> {
    let start = Instant::now();
    let n = closed_form_count(a, b, c, d)?;
    let mut r = RunReport::new("count", json!({ "a": a, "b": b, "c": c, "d": d }), None);
    r.count("closed_form", to_u64(&n)?);
    Ok(r.finish(start))
}

pub fn solve_structured(
    a: usize,
    b: usize,
    roots: Option<(&str, &str)>,
    seed: u64,
) -> Result<RunReport> {
    let start = Instant::now();
    let si = structured_from(a, b, roots, false, seed)?;
    let (_, _, c, d) = si.instance.params();
    let set = enumerate_solutions(&si)?;
    let verified = verify_solutions(&si.instance, &set.solutions)?;
    let mut distinct = set.solutions.clone();
    distinct.sort();
    distinct.dedup();
    let mut r = RunReport::new(
        "solve-structured",
        json!({ "a": a, "b": b, "c": c, "d": d, "roots_a": roots_json(&si.roots_a), "roots_b": roots_json(&si.roots_b) }),
        Some(seed),
    );
    r.count("structured", set.count() as u64);
    r.count("closed_form", to_u64(&closed_form_count(a, b, c, d)?)?);
    r.flag("verified", verified);
    r.flag("distinct", distinct.len() == set.count());
    r.details = json!({
        "solutions": set.solutions.iter().map(|s| s.to_strings().to_vec()).collect::<Vec<_>>(),
    });
    Ok(r.finish(start))
}

#[derive(Clone, Debug)]
pub enum NumericSource {
    Random,
    Structured(Option<(String, String)>),
    Given(Box<Instance>),
}

#[derive(Clone, Debug)]
pub struct NumericArgs {
    pub params: (usize, usize, usize, usize),
    pub source: NumericSource,
    pub seed: u64,
    pub repeats: usize,
    pub tol_residual: Option<f64>,
    pub tol_dedup: Option<f64>,
    pub paths_report: bool,
    /// keep only solutions found by at least two randomizations
    pub confirm: bool,
}

pub fn solve_numeric_cmd(args: &NumericArgs) -> Result<RunReport> {
    let start = Instant::now();
    let (a, b, c, d) = args.params;
    let mut cfg = SolverConfig::with_seed(args.seed);
    if let Some(t) = args.tol_residual {
        cfg.full_tol = t;
    }
    if let Some(t) = args.tol_dedup {
        cfg.dedup_tol = t;
    }
    cfg.validate()?;
    let (inst, structured) = match &args.source {
        NumericSource::Random => (generate_instance(a, b, c, d, args.seed)?, None),
        NumericSource::Structured(roots) => {
            if (c, d) != (a + b, a + b + 3) {
                return Err(Error::ParameterError(
                    "structured instances need c = a + b, d = a + b + 3".into(),
                ));
            }
            let si = structured_from(
                a,
                b,
                roots.as_ref().map(|(x, y)| (x.as_str(), y.as_str())),
                true,
                args.seed,
            )?;
            (si.instance.clone(), Some(si))
        }
        NumericSource::Given(inst) => (inst.as_ref().clone(), None),
    };
    let mut r = RunReport::new(
        "solve-numeric",
        json!({
            "a": inst.a, "b": inst.b, "c": inst.c, "d": inst.d,
            "repeats": args.repeats,
            "confirm": args.confirm,
            "tol_residual": cfg.full_tol,
            "tol_dedup": cfg.dedup_tol,
            "instance": inst,
        }),
        Some(args.seed),
    );
    let repeats = args.repeats.max(if args.confirm { 2 } else { 1 });
    let seeds = pglcount::numeric::repeat_seeds(args.seed, repeats);
    let mut runs = Vec::new();
    for &s in &seeds {
        runs.push(solve_numeric(
            &inst,
            &SolverConfig {
                seed: s,
                ..cfg.clone()
            },
        )?);
    }
    let counts: Vec<usize> = runs.iter().map(|run| run.set.count()).collect();
    let first = &runs[0];
    let set = if args.confirm {
        let sets: Vec<_> = runs.iter().map(|run| run.set.clone()).collect();
        confirm_across(&sets, cfg.confirm_tol, args.seed)
    } else {
        first.set.clone()
    };
    r.count("numeric", set.count() as u64);
    if !args.confirm {
        r.flag("stable", counts.windows(2).all(|w| w[0] == w[1]));
    }
    r.count(
        "closed_form",
        to_u64(&closed_form_count(inst.a, inst.b, inst.c, inst.d)?)?,
    );
    let mut details = json!({
        "count": set.count(),
        "paths_tracked": first.paths.len(),
        "repeat_seeds": seeds,
        "repeat_counts": counts,
        "bezout": first.bezout,
        "min_distance": set.min_distance,
        "solutions": set.solutions.iter().map(|s| json!({
            "entries": complex_json(&s.entries),
            "residual": s.residual,
            "det": s.det,
            "gap": s.gap,
            "cond": s.cond,
            "path": s.path,
        })).collect::<Vec<_>>(),
    });
    if let Some(si) = structured {
        let exact = enumerate_solutions(&si)?;
        let m = match_exact(&set, &exact.solutions, cfg.dedup_tol);
        r.count("structured", exact.count() as u64);
        r.flag("matched", m.one_to_one);
        details["match"] = serde_json::to_value(&m).expect("plain data");
    }
    if args.paths_report {
        let status = [
            PathStatus::Converged,
            PathStatus::Diverged,
            PathStatus::Truncated,
            PathStatus::Tracking,
        ];
        details["paths"] = json!({
            "status_counts": status.iter().map(|&s| (format!("{s:?}").to_lowercase(), json!(first.status_count(s)))).collect::<serde_json::Map<_, _>>(),
            "paths": first.paths.iter().map(|p| json!({
                "index": p.index,
                "status": p.status,
                "t": p.t,
                "steps": p.steps,
                "rejected": p.rejected,
                "residual": p.residual,
            })).collect::<Vec<_>>(),
        });
    }
    r.details = details;
    Ok(r.finish(start))
}

pub fn bott_verify_cmd(amax: usize, bmax: usize, cases: &[CaseTag]) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(
        "bott-verify",
        json!({ "amax": amax, "bmax": bmax, "cases": cases }),
        None,
    );
    let mut rows = Vec::new();
    for &case in cases {
        rows.extend(bott_verify(case, amax, bmax)?);
    }
    r.flag(
        "bott_equals_closed_form",
        rows.iter().all(|row| row.matched),
    );
    r.details = json!({ "rows": rows });
    Ok(r.finish(start))
}

fn wronskian_json(v: &Subspace) -> Result<Value> {
    let w = wronskian_form(v);
    Ok(json!({
        "degree": w.degree,
        "coeffs": roots_json(&w.coeffs),
        "squarefree": is_squarefree(&w)?,
    }))
}

pub fn wronskian_instance(inst: &Instance) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(
        "wronskian",
        json!({ "a": inst.a, "b": inst.b, "c": inst.c, "d": inst.d }),
        None,
    );
    let (wa, wb) = (wronskian_json(&inst.va)?, wronskian_json(&inst.vb)?);
    r.flag(
        "degree",
        wa["degree"] == (inst.a + 1) * (inst.d - inst.a)
            && wb["degree"] == (inst.b + 1) * (inst.d - inst.b),
    );
    r.details = json!({ "va": wa, "vb": wb });
    Ok(r.finish(start))
}

/// Wronskians of `samples` seeded random subspaces of dimension `b + 1` in degree `d`.
pub fn wronskian_sample(
    b: usize,
    d: usize,
    samples: usize,
    bound: i64,
    seed: u64,
) -> Result<RunReport> {
    use rand::SeedableRng;
    let start = Instant::now();
    if b >= d {
        return Err(Error::ParameterError("need b < d".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut r = RunReport::new(
        "wronskian",
        json!({ "b": b, "d": d, "samples": samples, "bound": bound }),
        Some(seed),
    );
    let (mut degree_ok, mut squarefree) = (0, 0);
    for _ in 0..samples {
        let w = wronskian_form(&pglcount::instance::random_subspace_bounded(
            d,
            b + 1,
            bound,
            &mut rng,
        ));
        degree_ok += usize::from(w.degree == (b + 1) * (d - b) && !w.is_zero());
        squarefree += usize::from(is_squarefree(&w)?);
    }
    r.flag("degree", degree_ok == samples);
    r.details = json!({ "expected_degree": (b + 1) * (d - b), "degree_ok": degree_ok, "squarefree": squarefree });
    Ok(r.finish(start))
}

pub fn dual(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    structured: bool,
    roots: Option<(&str, &str)>,
    seed: u64,
) -> Result<RunReport> {
    let start = Instant::now();
    let (da, db, dc, dd) = dual_params(a, b, c, d)
        .ok_or_else(|| Error::ParameterError("dual parameters are negative".into()))?;
    let mut r = RunReport::new(
        "dual",
        json!({ "a": a, "b": b, "c": c, "d": d }),
        Some(seed),
    );
    r.count("closed_form", to_u64(&closed_form_count(a, b, c, d)?)?);
    r.count(
        "dual_closed_form",
        to_u64(&closed_form_count(da, db, dc, dd)?)?,
    );
    let mut details = json!({ "dual_params": [da, db, dc, dd] });
    if structured {
        if (c, d) != (a + b, a + b + 3) {
            return Err(Error::ParameterError(
                "structured instances need c = a + b, d = a + b + 3".into(),
            ));
        }
        let si = structured_from(a, b, roots, false, seed)?;
        let set = enumerate_solutions(&si)?;
        for (name, map) in [
            ("adjoint", DualMap::Adjoint),
            ("identity", DualMap::Identity),
            ("adjoint_exchanged", DualMap::AdjointExchanged),
        ] {
            let rep = duality_report(&si, &set, map)?;
            r.flag(&format!("{name}_bijective"), rep.bijective());
            details[name] = serde_json::to_value(&rep).expect("plain data");
        }
        details["dual_instance"] =
            serde_json::to_value(dual_instance(&si.instance)?).expect("plain data");
    } else {
        let inst = generate_instance(a, b, c, d, seed)?;
        details["dual_instance"] = serde_json::to_value(dual_instance(&inst)?).expect("plain data");
    }
    r.details = details;
    Ok(r.finish(start))
}

pub fn generate(a: usize, b: usize, c: usize, d: usize, seed: u64) -> Result<Instance> {
    generate_instance(a, b, c, d, seed)
}

pub fn selftest(cfg: &SelftestConfig, pair: &PairFn) -> RunReport {
    let start = Instant::now();
    let mut r = RunReport::new(
        "selftest",
        json!({ "repeats": cfg.repeats }),
        Some(cfg.seed),
    );
    for c in checks::run_all(cfg, pair) {
        r.criterion(c);
    }
    r.finish(start)
}
