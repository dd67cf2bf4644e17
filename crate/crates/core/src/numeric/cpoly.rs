//! Dense-ish complex polynomials in three affine unknowns.

use std::collections::BTreeMap;

use num_complex::Complex64;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CPoly3 {
    terms: Vec<([u32; 3], Complex64)>,
}

impl CPoly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_map([([0; 3], c)].into_iter().collect())
    }

    /// `c0 + Σ c[i+1] y_i`
    pub fn affine(c: [Complex64; 4]) -> Self {
        let mut m = BTreeMap::new();
        m.insert([0, 0, 0], c[0]);
        m.insert([1, 0, 0], c[1]);
        m.insert([0, 1, 0], c[2]);
        m.insert([0, 0, 1], c[3]);
        Self::from_map(m)
    }

    /// `y_i^n - 1`
    pub fn start_equation(i: usize, n: u32) -> Self {
        let mut e = [0; 3];
        e[i] = n;
        let mut m = BTreeMap::new();
        m.insert(e, Complex64::new(1.0, 0.0));
        m.insert([0; 3], Complex64::new(-1.0, 0.0));
        Self::from_map(m)
    }

    fn from_map(m: BTreeMap<[u32; 3], Complex64>) -> Self {
        CPoly3 {
            terms: m
                .into_iter()
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    fn to_map(&self) -> BTreeMap<[u32; 3], Complex64> {
        self.terms.iter().copied().collect()
    }

    pub fn terms(&self) -> &[([u32; 3], Complex64)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, o: &CPoly3) -> CPoly3 {
        let mut m = self.to_map();
        for (e, c) in &o.terms {
            *m.entry(*e).or_default() += c;
        }
        Self::from_map(m)
    }

    pub fn scale(&self, k: Complex64) -> CPoly3 {
        CPoly3 {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn sub(&self, o: &CPoly3) -> CPoly3 {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &CPoly3) -> CPoly3 {
        let mut m: BTreeMap<[u32; 3], Complex64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                *m.entry([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]])
                    .or_default() += c1 * c2;
            }
        }
        Self::from_map(m)
    }

    pub fn eval(&self, y: &[Complex64; 3]) -> Complex64 {
        self.eval_grad(y).0
    }

    /// Value and gradient.
    pub fn eval_grad(&self, y: &[Complex64; 3]) -> (Complex64, [Complex64; 3]) {
        let deg = self.degree() as usize;
        let pw: Vec<Vec<Complex64>> = y
            .iter()
            .map(|&x| {
                let mut p = vec![Complex64::new(1.0, 0.0); deg + 1];
                for k in 1..=deg {
                    p[k] = p[k - 1] * x;
                }
                p
            })
            .collect();
        let mut val = Complex64::new(0.0, 0.0);
        let mut grad = [Complex64::new(0.0, 0.0); 3];
        for (e, c) in &self.terms {
            let f = [
                pw[0][e[0] as usize],
                pw[1][e[1] as usize],
                pw[2][e[2] as usize],
            ];
            val += c * f[0] * f[1] * f[2];
            for i in 0..3 {
                if e[i] > 0 {
                    let mut t = c * e[i] as f64 * pw[i][e[i] as usize - 1];
                    for (j, fj) in f.iter().enumerate() {
                        if j != i {
                            t *= fj;
                        }
                    }
                    grad[i] += t;
                }
            }
        }
        (val, grad)
    }
}

/// Determinant of a square matrix of polynomials, expanded along rows with
/// memoisation on the used columns.
pub fn det_cpoly(m: &[Vec<CPoly3>]) -> CPoly3 {
    let n = m.len();
    let mut dp: Vec<Option<CPoly3>> = vec![None; 1 << n];
    dp[0] = Some(CPoly3::constant(Complex64::new(1.0, 0.0)));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].clone() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in (0..n).filter(|c| mask & (1 << c) == 0) {
            let mut term = cur.mul(&m[row][col]);
            if (mask >> (col + 1)).count_ones() % 2 == 1 {
                term = term.scale(Complex64::new(-1.0, 0.0));
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
    }
    dp[(1 << n) - 1].take().unwrap()
}

/// Numeric determinant of a small complex matrix.
pub fn det_c(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
    mat.determinant()
}
