//! Integral Gram matrices, unimodularity checks and exact theta
//! coefficients by short-vector enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// Default cap on visited enumeration nodes.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Vector counts `N_0 … N_cut` by squared norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCoefficients {
    counts: Vec<BigInt>,
}

impl ThetaCoefficients {
    /// Requires `N_0 = 1`, all counts non-negative and `N_k` even for `k ≥ 1`.
    pub fn new(counts: Vec<BigInt>) -> Result<Self> {
        if counts.first() != Some(&BigInt::one()) {
            return Err(Error::InvalidTheta("N_0 must be 1".into()));
        }
        for (k, c) in counts.iter().enumerate().skip(1) {
            if c.is_negative() {
                return Err(Error::InvalidTheta(format!("N_{k} = {c} is negative")));
            }
            if c % 2 != BigInt::zero() {
                return Err(Error::InvalidTheta(format!(
                    "N_{k} = {c} is odd; vectors come in ± pairs"
                )));
            }
        }
        Ok(ThetaCoefficients { counts })
    }

    pub fn from_u64(counts: &[u64]) -> Result<Self> {
        ThetaCoefficients::new(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Takes the coefficients of a series that must be a genuine theta series.
    pub fn from_series(s: &QSeries) -> Result<Self> {
        if !s.is_nonnegative_integral() {
            return Err(Error::InvalidTheta(
                "series has negative or non-integral coefficients".into(),
            ));
        }
        ThetaCoefficients::new(s.coeffs().iter().map(|c| c.numer().clone()).collect())
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    /// Inclusive maximum squared norm covered.
    pub fn cut(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn as_rationals(&self) -> Vec<BigRational> {
        self.counts
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect()
    }

    pub fn to_series(&self) -> QSeries {
        QSeries::new(self.as_rationals())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A square integer matrix, meant to be the Gram matrix of a lattice basis.
/// Nothing beyond squareness is checked until [`validate_unimodular`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<i64>>,
}

impl GramMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidGram("empty matrix".into()));
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGram("matrix is not square".into()));
        }
        Ok(GramMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        GramMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// `xᵀ G x`.
    pub fn norm(&self, x: &[i64]) -> i64 {
        let n = self.dim();
        (0..n)
            .map(|i| x[i] * (0..n).map(|j| self.entries[i][j] * x[j]).sum::<i64>())
            .sum()
    }

    /// Leading principal minors `d_1 … d_n` by fraction-free elimination;
    /// `d_n` is the determinant. Stops early at the first non-positive minor.
    fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.dim();
        let mut a: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = a[k][k].clone();
            minors.push(pivot.clone());
            if !pivot.is_positive() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = pivot;
        }
        minors
    }
}

/// Checks symmetry, positive definiteness and determinant 1, and reports
/// whether the lattice is even. Even lattices exist only when `8 | n`.
pub fn validate_unimodular(g: &GramMatrix) -> Result<Parity> {
    let n = g.dim();
    for i in 0..n {
        for j in 0..i {
            if g.get(i, j) != g.get(j, i) {
                return Err(Error::InvalidGram(format!(
                    "not symmetric: entry ({i},{j}) = {} but ({j},{i}) = {}",
                    g.get(i, j),
                    g.get(j, i)
                )));
            }
        }
    }
    let minors = g.leading_minors();
    if let Some((k, d)) = minors.iter().enumerate().find(|(_, d)| !d.is_positive()) {
        return Err(Error::InvalidGram(format!(
            "not positive definite: leading minor of size {} is {d}",
            k + 1
        )));
    }
    let det = &minors[n - 1];
    if !det.is_one() {
        return Err(Error::InvalidGram(format!("determinant is {det}, not 1")));
    }
    let parity = if (0..n).all(|i| g.get(i, i) % 2 == 0) {
        Parity::Even
    } else {
        Parity::Odd
    };
    if parity == Parity::Even && n % 8 != 0 {
        return Err(Error::InvalidGram(format!(
            "even unimodular lattice claimed in dimension {n}, which is not a multiple of 8"
        )));
    }
    Ok(parity)
}

/// Gaussian-heuristic estimate of lattice points in a ball of squared
/// radius `r2` for a determinant-1 lattice: `π^{n/2} r^n / Γ(n/2 + 1)`.
fn estimated_points(n: usize, r2: f64) -> f64 {
    let half = n as f64 / 2.0;
    let mut ln_gamma = 0.0;
    // Γ(n/2 + 1) by the recurrence down to Γ(1) = 1 or Γ(1/2) = √π
    let mut t = half;
    while t > 0.75 {
        ln_gamma += t.ln();
        t -= 1.0;
    }
    if n % 2 == 1 {
        ln_gamma += 0.5 * std::f64::consts::PI.ln();
    }
    (half * (std::f64::consts::PI * r2).ln() - ln_gamma).exp()
}

struct Enumerator {
    /// `q_ii` of the quadratic-form decomposition.
    diag: Vec<BigRational>,
    /// `q_ij` for `j > i`.
    upper: Vec<Vec<BigRational>>,
    max_norm: BigRational,
    counts: Vec<u64>,
    nodes: u64,
    budget: u64,
}

/// Rewrites `xᵀGx = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²` exactly.
fn decompose(g: &GramMatrix) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = g.dim();
    let mut qm: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(BigInt::from(g.get(i, j))))
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            qm[j][i] = qm[i][j].clone();
            qm[i][j] = &qm[i][j] / &qm[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &qm[k][i] * &qm[i][l];
                qm[k][l] -= t;
            }
        }
    }
    let diag = (0..n).map(|i| qm[i][i].clone()).collect();
    (diag, qm)
}

/// Smallest and largest integers `x` with `(x - c)² ≤ b`.
fn integer_range(c: &BigRational, b: &BigRational) -> Option<(i64, i64)> {
    let inside = |x: i64| {
        let d = BigRational::from_integer(BigInt::from(x)) - c;
        &d * &d <= *b
    };
    let cf = c.to_f64()?;
    let r = b.to_f64()?.sqrt();
    let start = (cf - r).floor() as i64 - 1;
    let end = (cf + r).ceil() as i64 + 1;
    let lo = (start..=end).find(|&x| inside(x))?;
    let hi = (lo..=end).rev().find(|&x| inside(x))?;
    Some((lo, hi))
}

impl Enumerator {
    fn visit(&mut self, i: usize, x: &mut [i64], remaining: BigRational, zero_above: bool) -> Result<()> {
        let n = x.len();
        let center: BigRational = -(i + 1..n)
            .filter(|&j| x[j] != 0)
            .map(|j| &self.upper[i][j] * BigInt::from(x[j]))
            .sum::<BigRational>();
        let bound = &remaining / &self.diag[i];
        let Some((mut lo, hi)) = integer_range(&center, &bound) else {
            return Ok(());
        };
        if zero_above {
            // first nonzero coordinate (from the top) is taken positive
            lo = lo.max(0);
        }
        for xi in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} enumeration nodes visited",
                    self.budget
                )));
            }
            let d = BigRational::from_integer(BigInt::from(xi)) - &center;
            let rest = &remaining - &d * &d * &self.diag[i];
            x[i] = xi;
            let still_zero = zero_above && xi == 0;
            if i == 0 {
                if !still_zero {
                    let norm = &self.max_norm - &rest;
                    debug_assert!(norm.is_integer());
                    let k = norm.to_integer().to_usize().expect("norm within range");
                    self.counts[k] += 2;
                }
            } else {
                self.visit(i - 1, x, rest, still_zero)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
}

/// Exact `N_0 … N_max_norm` using the default node budget.
pub fn enumerate_counts(g: &GramMatrix, max_norm: usize) -> Result<ThetaCoefficients> {
    enumerate_counts_with_budget(g, max_norm, DEFAULT_BUDGET)
}

/// Fincke–Pohst enumeration over an exact rational decomposition of the
/// form. Vectors are taken up to sign and counted twice. Fails instead of
/// truncating when more than `budget` nodes would be needed.
pub fn enumerate_counts_with_budget(
    g: &GramMatrix,
    max_norm: usize,
    budget: u64,
) -> Result<ThetaCoefficients> {
    validate_unimodular(g)?;
    if max_norm == 0 {
        return Err(Error::Domain("max_norm must be at least 1".into()));
    }
    let n = g.dim();
    let estimate = estimated_points(n, max_norm as f64);
    if estimate > budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "about {estimate:.3e} lattice vectors of norm ≤ {max_norm} expected, budget is {budget}"
        )));
    }
    let (diag, upper) = decompose(g);
    let max = BigRational::from_integer(BigInt::from(max_norm));
    let mut e = Enumerator {
        diag,
        upper,
        max_norm: max.clone(),
        counts: vec![0; max_norm + 1],
        nodes: 0,
        budget,
    };
    let mut x = vec![0i64; n];
    e.visit(n - 1, &mut x, max, true)?;
    e.counts[0] = 1;
    ThetaCoefficients::from_u64(&e.counts)
}

/// The `E₈` root lattice in the simple-root basis (its Cartan matrix).
pub fn e8_cartan() -> GramMatrix {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    GramMatrix { entries: m }
}
