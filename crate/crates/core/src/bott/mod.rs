//! The two enumerative degrees by torus localization, and their closed forms.
//!
//! The torus acts with characters `u`, `v`. Its fixed locus in the blown-up
//! P³ is two lines and two families of `(b+1)(d-b)` points; each component
//! carries the characters of sections of `Q` restricted to it and the
//! equivariant top Chern class of its normal bundle.

mod chern;
mod poly;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use chern::{
    chern_det, eigenbundle_chern, elementary_symmetric, equivariant_chern, whitney, ChernPoly,
    EquivClass,
};
pub use poly::{PolyUV, RatFunc};

use crate::error::{Error, Result};
use crate::instance::{validate_params, CaseTag};
use crate::scalar::{binomial, format_rational, frac, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    LineL1,
    LineL2,
    PointOverL1,
    PointOverL2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponentData {
    pub kind: ComponentKind,
    pub multiplicity: u64,
    /// characters of the eigen-sections of `Q` on the component
    pub characters: Vec<PolyUV>,
    /// top equivariant Chern class of the normal bundle
    pub normal: EquivClass,
}

impl FixedComponentData {
    pub fn swap_uv(&self) -> FixedComponentData {
        FixedComponentData {
            kind: match self.kind {
                ComponentKind::LineL1 => ComponentKind::LineL2,
                ComponentKind::LineL2 => ComponentKind::LineL1,
                ComponentKind::PointOverL1 => ComponentKind::PointOverL2,
                ComponentKind::PointOverL2 => ComponentKind::PointOverL1,
            },
            multiplicity: self.multiplicity,
            characters: self.characters.iter().map(PolyUV::swap_uv).collect(),
            normal: self.normal.swap_uv(),
        }
    }

    fn is_line(&self) -> bool {
        matches!(self.kind, ComponentKind::LineL1 | ComponentKind::LineL2)
    }
}

pub fn fixed_components(b: usize, d: usize) -> Result<Vec<FixedComponentData>> {
    if b >= d {
        return Err(Error::ParameterError(format!(
            "need b < d, got b = {b}, d = {d}"
        )));
    }
    let k = ((b + 1) * (d - b)) as i64;
    let ch = |i: usize| PolyUV::linear((d - i) as i64, i as i64);
    let line2: Vec<PolyUV> = (0..=b).map(ch).collect();
    let mut point2: Vec<PolyUV> = (0..b).map(ch).collect();
    point2.push(PolyUV::linear((d - b - 1) as i64, (b + 1) as i64));
    let uv = PolyUV::linear(1, -1);
    let vu = PolyUV::linear(-1, 1);
    let line_normal = |x: &PolyUV| EquivClass::polys(x.pow(2), x.scale(&rat(2 - k)));
    let swap = |xs: &[PolyUV]| xs.iter().map(PolyUV::swap_uv).collect::<Vec<_>>();
    Ok(vec![
        FixedComponentData {
            kind: ComponentKind::LineL1,
            multiplicity: 1,
            characters: swap(&line2),
            normal: line_normal(&uv),
        },
        FixedComponentData {
            kind: ComponentKind::LineL2,
            multiplicity: 1,
            characters: line2,
            normal: line_normal(&vu),
        },
        FixedComponentData {
            kind: ComponentKind::PointOverL1,
            multiplicity: k as u64,
            characters: swap(&point2),
            normal: EquivClass::from_poly(vu.pow(3)),
        },
        FixedComponentData {
            kind: ComponentKind::PointOverL2,
            multiplicity: k as u64,
            characters: point2,
            normal: EquivClass::from_poly(uv.pow(3)),
        },
    ])
}

/// `c1³ + c3 - 2 c1 c2` for case A and `c3` for case B, obtained by expanding
/// the Porteous determinant.
pub fn porteous_class(case: CaseTag) -> ChernPoly {
    match case {
        CaseTag::A => porteous_determinant(1, 3),
        CaseTag::B => porteous_determinant(3, 1),
    }
}

/// `det(c_(e + j - i))` of size `n`.
pub fn porteous_determinant(e: i64, n: usize) -> ChernPoly {
    let m: Vec<Vec<ChernPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ChernPoly::c(e + j as i64 - i as i64))
                .collect()
        })
        .collect();
    chern_det(&m)
}

/// The closed expression the case-A determinant must expand to.
pub fn porteous_closed_a() -> ChernPoly {
    let c1 = ChernPoly::c(1);
    c1.mul(&c1)
        .mul(&c1)
        .add(&ChernPoly::c(3))
        .sub(&c1.mul(&ChernPoly::c(2)).scale(&rat(2)))
}

/// Localization summand of one component as a rational function.
fn contribution(p: &ChernPoly, comp: &FixedComponentData) -> Result<RatFunc> {
    // The torus acts on the fibres of Q through the dual of its action on
    // sections, so the fibre weights are the negated characters.
    let weights: Vec<PolyUV> = comp.characters.iter().map(PolyUV::neg).collect();
    let c = [1, 2, 3].map(|k| equivariant_chern(k, &weights));
    let value = p.eval(&c);
    let quotient = value.mul(&comp.normal.inv()?);
    let integrated = if comp.is_line() {
        quotient.h_coeff().clone()
    } else {
        quotient.a
    };
    Ok(integrated.scale(&Rational::from_integer(comp.multiplicity.into())))
}

/// Sum of the localization summands, before the constancy check.
pub fn bott_total(p: &ChernPoly, comps: &[FixedComponentData]) -> Result<RatFunc> {
    let top = p.graded_part(3);
    comps.iter().try_fold(RatFunc::zero(), |acc, comp| {
        Ok(acc.add(&contribution(&top, comp)?))
    })
}

pub fn bott_degree(p: &ChernPoly, b: usize, d: usize) -> Result<Rational> {
    bott_degree_on(p, &fixed_components(b, d)?, (b as u64) << 32 | d as u64)
}

/// Evaluates the localization total at `(1, 0)` and at a random rational
/// point and returns the common value.
pub fn bott_degree_on(p: &ChernPoly, comps: &[FixedComponentData], seed: u64) -> Result<Rational> {
    let total = bott_total(p, comps)?;
    let base = total.eval(&rat(1), &rat(0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let u = frac(rng.gen_range(-97..=97), rng.gen_range(1..=31));
        let v = frac(rng.gen_range(-97..=97), rng.gen_range(1..=31));
        match total.eval(&u, &v) {
            Ok(other) if other == base => return Ok(base),
            Ok(other) => {
                return Err(Error::NonConstantResult(
                    format_rational(&base),
                    format_rational(&other),
                ))
            }
            Err(Error::PoleAtEvaluation) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PoleAtEvaluation)
}

/// Number of solutions for general data satisfying the finiteness condition.
pub fn closed_form_count(a: usize, b: usize, c: usize, d: usize) -> Result<Rational> {
    let case = validate_params(a, b, c, d)?;
    Ok(closed_form_for_case(case, a, b))
}

pub fn closed_form_for_case(case: CaseTag, a: usize, b: usize) -> Rational {
    let (a, b) = (a as i64, b as i64);
    match case {
        CaseTag::A => {
            Rational::from_integer(binomial(a as usize + 3, 3) * binomial(b as usize + 3, 3) * 6)
        }
        CaseTag::B => frac(a * b * (a * a - 1) * (b * b - 1), 6),
    }
}

/// Parameters of a grid cell: `(a, b, c, d)`.
pub fn grid_params(case: CaseTag, a: usize, b: usize) -> (usize, usize, usize, usize) {
    match case {
        CaseTag::A => (a, b, a + b, a + b + 3),
        CaseTag::B => (a, b, a + b - 2, a + b - 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottRow {
    pub case: CaseTag,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub bott: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub closed_form: Rational,
    pub matched: bool,
}

/// Compares the localization degree with the closed form on the grid
/// `a, b ≤ amax, bmax` (from 0 in case A, from 2 in case B).
pub fn bott_verify(case: CaseTag, amax: usize, bmax: usize) -> Result<Vec<BottRow>> {
    let lo = match case {
        CaseTag::A => 0,
        CaseTag::B => 2,
    };
    let cells: Vec<(usize, usize)> = (lo..=amax)
        .flat_map(|a| (lo..=bmax).map(move |b| (a, b)))
        .collect();
    let p = porteous_class(case);
    cells
        .par_iter()
        .map(|&(a, b)| {
            let (_, _, c, d) = grid_params(case, a, b);
            let bott = bott_degree(&p, b, d)?;
            let closed_form = closed_form_for_case(case, a, b);
            Ok(BottRow {
                case,
                a,
                b,
                c,
                d,
                matched: bott == closed_form,
                bott,
                closed_form,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    #[test]
    fn porteous_examples() {
        assert_eq!(porteous_class(CaseTag::B), ChernPoly::c(3));
        assert_eq!(porteous_class(CaseTag::A), porteous_closed_a());
    }

    #[test]
    fn fixed_components_b0_d3() {
        let comps = fixed_components(0, 3).unwrap();
        assert_eq!(comps[1].characters, vec![PolyUV::linear(3, 0)]);
        assert_eq!(comps[3].characters, vec![PolyUV::linear(2, 1)]);
        assert_eq!(comps[0].characters, vec![PolyUV::linear(0, 3)]);
        assert_eq!(
            comps.iter().map(|c| c.multiplicity).collect::<Vec<_>>(),
            vec![1, 1, 3, 3]
        );
        let k = 3;
        let uv = PolyUV::linear(1, -1);
        assert_eq!(
            comps[0].normal,
            EquivClass::polys(uv.pow(2), uv.scale(&rat(2 - k)))
        );
        assert!(fixed_components(3, 3).is_err());
    }

    #[test]
    fn multiplicities_and_character_counts() {
        for d in 1..8 {
            for b in 0..d {
                let comps = fixed_components(b, d).unwrap();
                let k = ((b + 1) * (d - b)) as u64;
                assert_eq!(comps.iter().map(|c| c.multiplicity).sum::<u64>(), 2 + 2 * k);
                assert!(comps.iter().all(|c| c.characters.len() == b + 1));
            }
        }
    }

    #[test]
    fn line_summand_matches_worked_form() {
        // L̃₁ contributes c3ᵀ (K - 2) / (u - v)³
        let (b, d) = (2, 5);
        let comps = fixed_components(b, d).unwrap();
        let k = ((b + 1) * (d - b)) as i64;
        let got = contribution(&ChernPoly::c(3), &comps[0]).unwrap();
        let weights: Vec<PolyUV> = comps[0].characters.iter().map(PolyUV::neg).collect();
        let c3 = elementary_symmetric(3, &weights);
        let expect = RatFunc::new(c3.scale(&rat(k - 2)), PolyUV::linear(1, -1).pow(3)).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_degree(&ChernPoly::c(3), 2, 3).unwrap(), rat(6));
        assert_eq!(bott_degree(&porteous_closed_a(), 0, 3).unwrap(), rat(6));
        assert_eq!(bott_degree(&porteous_closed_a(), 0, 4).unwrap(), rat(24));
    }

    #[test]
    fn swap_symmetry() {
        for (b, d) in [(0, 3), (1, 5), (3, 6)] {
            let comps = fixed_components(b, d).unwrap();
            let swapped: Vec<FixedComponentData> =
                comps.iter().map(FixedComponentData::swap_uv).collect();
            for p in [ChernPoly::c(3), porteous_closed_a()] {
                assert_eq!(
                    bott_degree_on(&p, &comps, 1).unwrap(),
                    bott_degree_on(&p, &swapped, 2).unwrap()
                );
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_count(1, 0, 1, 4).unwrap(), rat(24));
        assert_eq!(closed_form_count(0, 0, 0, 3).unwrap(), rat(6));
        assert_eq!(closed_form_count(2, 2, 2, 3).unwrap(), rat(6));
        assert_eq!(closed_form_count(2, 3, 3, 4).unwrap(), rat(24));
        assert!(closed_form_count(1, 1, 1, 4).is_err());
        assert_eq!(
            closed_form_for_case(CaseTag::B, 3, 4),
            frac(3 * 4 * 8 * 15, 6)
        );
    }

    #[test]
    fn small_grids() {
        for row in bott_verify(CaseTag::A, 3, 3)
            .unwrap()
            .into_iter()
            .chain(bott_verify(CaseTag::B, 5, 5).unwrap())
        {
            assert!(row.matched, "{row:?}");
        }
    }
}
