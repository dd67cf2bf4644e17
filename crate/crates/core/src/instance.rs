//! Problem instances `(a, b, c, d, V_a, V_b)` and their seeded generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::Subspace;
use crate::linalg::{rank_exact, QMatrix};
use crate::scalar::rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `d - c = 3`, `a + b = c`
    A,
    /// `d - c = 1`, `a + b = c + 2`
    B,
}

impl CaseTag {
    pub fn dual(self) -> CaseTag {
        match self {
            CaseTag::A => CaseTag::B,
            CaseTag::B => CaseTag::A,
        }
    }
}

impl std::str::FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(CaseTag::A),
            "B" | "b" => Ok(CaseTag::B),
            _ => Err(Error::Parse(format!("unknown case {s:?}, expected A or B"))),
        }
    }
}

/// Which branch of `(a + b - c + 1)(d - c) = 3` the parameters fall in, without
/// the dimension inequalities.
pub fn finiteness_case(a: usize, b: usize, c: usize, d: usize) -> Result<CaseTag> {
    let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
    match (a + b - c + 1, d - c) {
        (1, 3) => Ok(CaseTag::A),
        (3, 1) => Ok(CaseTag::B),
        (e, f) => Err(Error::ParameterError(format!(
            "(a+b-c+1)(d-c) = {e}·{f} = {}, expected 3",
            e * f
        ))),
    }
}

/// Codimension `(d - c)(a + b - c + 1)` of the rank condition.
pub fn codimension(a: usize, b: usize, c: usize, d: usize) -> i64 {
    (d as i64 - c as i64) * (a as i64 + b as i64 - c as i64 + 1)
}

/// Full validation of instance parameters: finiteness plus `a <= c <= d`, `b <= c`.
pub fn validate_params(a: usize, b: usize, c: usize, d: usize) -> Result<CaseTag> {
    let case = finiteness_case(a, b, c, d)?;
    if a > c || b > c || c > d {
        return Err(Error::ParameterError(format!(
            "need a <= c <= d and b <= c, got a={a}, b={b}, c={c}, d={d}"
        )));
    }
    Ok(case)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr")]
pub struct Instance {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub va: Subspace,
    pub vb: Subspace,
    pub case: CaseTag,
}

#[derive(Deserialize)]
struct InstanceRepr {
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    va: Subspace,
    vb: Subspace,
    #[serde(default)]
    case: Option<CaseTag>,
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = Error;
    fn try_from(r: InstanceRepr) -> Result<Self> {
        let inst = Instance::new(r.a, r.b, r.c, r.d, r.va, r.vb)?;
        if let Some(case) = r.case {
            if case != inst.case {
                return Err(Error::ParameterError(format!(
                    "case tag {case:?} does not match parameters (expected {:?})",
                    inst.case
                )));
            }
        }
        Ok(inst)
    }
}

impl Instance {
    pub fn new(a: usize, b: usize, c: usize, d: usize, va: Subspace, vb: Subspace) -> Result<Self> {
        let case = validate_params(a, b, c, d)?;
        for (name, v, k) in [("V_a", &va, a), ("V_b", &vb, b)] {
            if v.degree() != d {
                return Err(Error::DegreeMismatch(d, v.degree()));
            }
            if v.dim() != k + 1 {
                return Err(Error::ParameterError(format!(
                    "{name} has dimension {}, expected {}",
                    v.dim(),
                    k + 1
                )));
            }
        }
        Ok(Instance {
            a,
            b,
            c,
            d,
            va,
            vb,
            case,
        })
    }

    pub fn params(&self) -> (usize, usize, usize, usize) {
        (self.a, self.b, self.c, self.d)
    }
}

pub(crate) fn random_full_rank(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> QMatrix {
    loop {
        let m: QMatrix = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| rat(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        if rank_exact(&m) == rows {
            return m;
        }
    }
}

/// A seeded random subspace of `C[s,t]_d` of dimension `dim`, with integer
/// coefficients in `[-9, 9]` before echelonisation.
pub fn random_subspace(d: usize, dim: usize, rng: &mut impl Rng) -> Subspace {
    random_subspace_bounded(d, dim, 9, rng)
}

/// As [`random_subspace`] with coefficients in `[-bound, bound]`.
pub fn random_subspace_bounded(d: usize, dim: usize, bound: i64, rng: &mut impl Rng) -> Subspace {
    let m = random_full_rank(rng, dim, d + 1, bound);
    Subspace::spanned_by(d, &m).expect("rows have length d + 1")
}

pub fn generate_instance(a: usize, b: usize, c: usize, d: usize, seed: u64) -> Result<Instance> {
    validate_params(a, b, c, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let va = random_subspace(d, a + 1, &mut rng);
    let vb = random_subspace(d, b + 1, &mut rng);
    Instance::new(a, b, c, d, va, vb)
}
