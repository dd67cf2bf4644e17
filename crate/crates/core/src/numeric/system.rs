use itertools::Itertools;
use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::Rng;

use super::cpoly::CPoly3;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::mpoly::{det_q4, QPoly4};
use crate::pairing::{build_pairing_matrix, PairingMatrix, PairingMode};
use crate::scalar::to_f64;

/// Square system in three chart unknowns `y`, with `σ = base + Σ y_i dirs[i]`.
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub base: [Complex64; 4],
    pub dirs: [[Complex64; 4]; 3],
    pub equations: Vec<CPoly3>,
    pub degrees: Vec<u32>,
    /// every reduced minor on the chart, scaled like the equations
    pub minors: Vec<CPoly3>,
    pub minor_size: usize,
    /// the pairing matrix in homogeneous coordinates
    pub matrix: Vec<Vec<QPoly4>>,
    /// typical entry size of `matrix` on the unit sphere
    pub entry_scale: f64,
    pub gamma: Complex64,
}

impl PolySystem {
    pub fn bezout_number(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).product()
    }

    pub fn point(&self, y: &[Complex64; 3]) -> [Complex64; 4] {
        let mut out = self.base;
        for (yi, dir) in y.iter().zip(&self.dirs) {
            for k in 0..4 {
                out[k] += yi * dir[k];
            }
        }
        out
    }
}

pub(crate) fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub(crate) fn random_unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn substitute(p: &QPoly4, powers: &[Vec<CPoly3>; 4]) -> CPoly3 {
    p.terms().fold(CPoly3::zero(), |acc, (e, c)| {
        let mut t = CPoly3::constant(Complex64::new(to_f64(c), 0.0));
        for k in 0..4 {
            if e[k] > 0 {
                t = t.mul(&powers[k][e[k] as usize]);
            }
        }
        acc.add(&t)
    })
}

/// Scales `p` so its largest modulus over a few points of the unit torus is 1.
fn normalize(p: &CPoly3, rng: &mut impl Rng) -> CPoly3 {
    let m = (0..6)
        .map(|_| {
            p.eval(&[random_unit(rng), random_unit(rng), random_unit(rng)])
                .norm()
        })
        .fold(0.0, f64::max);
    if m > 0.0 {
        p.scale(Complex64::new(1.0 / m, 0.0))
    } else {
        p.clone()
    }
}

/// The `(c-a+1) × (c-a+1)` minors of the pairing matrix on a random affine
/// chart, with the forced power of `det` removed, randomized down to three
/// equations when there are more.
pub fn build_minor_system(inst: &Instance, rng: &mut impl Rng) -> Result<PolySystem> {
    let PairingMatrix::Symbolic(matrix) = build_pairing_matrix(inst, PairingMode::Symbolic) else {
        unreachable!()
    };
    let m = inst.c - inst.a + 1;
    let (rows, cols) = (matrix.len(), matrix.first().map_or(0, Vec::len));
    if m > rows.min(cols) {
        return Err(Error::ParameterError(
            "minor size exceeds the pairing matrix".into(),
        ));
    }
    // orthonormal frame, so a chart point has |x|² = 1 + |y|² and no
    // projective point gets a tiny representative
    let frame = Matrix4::from_fn(|_, _| random_complex(rng)).qr().q();
    let base: [Complex64; 4] = std::array::from_fn(|i| frame[(i, 0)]);
    let dirs: [[Complex64; 4]; 3] =
        std::array::from_fn(|k| std::array::from_fn(|i| frame[(i, k + 1)]));
    let d = inst.d;
    let powers: [Vec<CPoly3>; 4] = std::array::from_fn(|k| {
        let l = CPoly3::affine([base[k], dirs[0][k], dirs[1][k], dirs[2][k]]);
        let mut p = vec![CPoly3::constant(Complex64::new(1.0, 0.0))];
        for e in 1..=d * m {
            p.push(p[e - 1].mul(&l));
        }
        p
    });
    // Every m × m minor factors through Λ^m Sym^d(σ), which carries
    // det(σ)^(m(m-1)/2); dividing it out removes that part of the excess
    // component on the quadric.
    let det_power = QPoly4::det().pow(m * (m - 1) / 2);
    let reduced: Vec<QPoly4> = (0..rows)
        .combinations(m)
        .cartesian_product((0..cols).combinations(m).collect::<Vec<_>>())
        .map(|(ri, ci)| {
            let sub: Vec<Vec<QPoly4>> = ri
                .iter()
                .map(|&i| ci.iter().map(|&j| matrix[i][j].clone()).collect())
                .collect();
            let minor = det_q4(&sub);
            minor.div_exact(&det_power).ok_or_else(|| {
                Error::VerificationFailure(
                    "a minor is not divisible by the expected power of det".into(),
                )
            })
        })
        .collect::<Result<_>>()?;
    let minors: Vec<CPoly3> = reduced
        .iter()
        .map(|p| normalize(&substitute(p, &powers), rng))
        .collect();
    if minors.len() < 3 {
        return Err(Error::ParameterError("fewer than three minors".into()));
    }
    let equations: Vec<CPoly3> = if minors.len() == 3 {
        minors.clone()
    } else {
        (0..3)
            .map(|_| {
                let combo = minors.iter().fold(CPoly3::zero(), |acc, p| {
                    acc.add(&p.scale(random_complex(rng)))
                });
                normalize(&combo, rng)
            })
            .collect()
    };
    let degrees = equations.iter().map(CPoly3::degree).collect();
    let entry_scale = super::entry_scale(&matrix, rng);
    Ok(PolySystem {
        base,
        dirs,
        equations,
        degrees,
        minors,
        minor_size: m,
        matrix,
        entry_scale,
        gamma: random_unit(rng),
    })
}
