//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use unimodular_secrecy::lattice::GramMatrix;
use unimodular_secrecy::poly::PolyQ;
use unimodular_secrecy::rat::{q, qi};

/// Sample points per unit half-width of the sign-scan grid on (-1, 1).
pub const STURM_SAMPLES: i64 = 10_000;

/// Exact inverse of an integer matrix with determinant ±1.
pub fn unimodular_inverse(g: &GramMatrix) -> Vec<Vec<i64>> {
    let n = g.dim();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        qi(g.get(i, j))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("nonsingular");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    m.iter()
        .map(|row| row[n..].iter().map(|v| v.to_integer().to_i64().unwrap()).collect())
        .collect()
}

/// `N_0..=N_max_norm` for the Gram `g` by scanning every coefficient vector
/// in the box `|c_i| ≤ bound`.
pub fn box_counts(g: &GramMatrix, max_norm: i64, bound: i64) -> Vec<u64> {
    let n = g.dim();
    let mut c = vec![-bound; n];
    let mut counts = vec![0u64; max_norm as usize + 1];
    loop {
        let norm = g.norm(&c);
        if norm <= max_norm {
            counts[norm as usize] += 1;
        }
        let mut i = 0;
        while i < n && c[i] == bound {
            c[i] = -bound;
            i += 1;
        }
        if i == n {
            return counts;
        }
        c[i] += 1;
    }
}

/// Box half-width that provably contains every vector of norm ≤ `max_norm`:
/// `|c_i| ≤ √(max_norm · (G⁻¹)_ii)`.
pub fn box_bound(g: &GramMatrix, max_norm: i64) -> i64 {
    let inv = unimodular_inverse(g);
    (0..g.dim())
        .map(|i| ((max_norm * inv[i][i]) as f64).sqrt().floor() as i64)
        .max()
        .unwrap_or(0)
}

/// `UᵀGU` for `U` a product of `ops` random elementary shears, so the form
/// describes the same lattice in another basis.
pub fn random_basis_change(g: &GramMatrix, ops: usize, rng: &mut StdRng) -> GramMatrix {
    let n = g.dim();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    if n > 1 {
        for _ in 0..ops {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let k = if rng.gen_bool(0.5) { 1 } else { -1 };
            // column i += k * column j
            for row in u.iter_mut() {
                row[i] += k * row[j];
            }
        }
    }
    let e = g.entries();
    let gu: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| e[i][k] * u[k][j]).sum()).collect())
        .collect();
    let out = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| u[k][i] * gu[k][j]).sum()).collect())
        .collect();
    GramMatrix::new(out).expect("square")
}

/// Random polynomial with rational roots at cell midpoints of the sample
/// grid on (-1, 1), separated by at least 1e-3, times root-free quadratics.
pub fn random_poly(rng: &mut StdRng) -> (PolyQ, usize) {
    let degree = rng.gen_range(1..=10);
    let mut roots: Vec<i64> = Vec::new();
    let mut quadratics = 0;
    let mut d = 0;
    while d < degree {
        if degree - d >= 2 && rng.gen_bool(0.2) {
            quadratics += 1;
            d += 2;
            continue;
        }
        // cell index j puts the root at -1 + (2j+1)/STURM_SAMPLES
        loop {
            let j = rng.gen_range(0..STURM_SAMPLES);
            if roots.iter().all(|&r| (r - j).abs() >= 5) {
                roots.push(j);
                break;
            }
        }
        d += 1;
    }
    let lead = q(rng.gen_range(1..50) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..50));
    let mut p = PolyQ::constant(lead);
    for &j in &roots {
        p = &p * &PolyQ::linear_root(q(2 * j + 1 - STURM_SAMPLES, STURM_SAMPLES));
    }
    for _ in 0..quadratics {
        let c = q(rng.gen_range(1..100), rng.gen_range(1..100));
        p = &p * &PolyQ::new(vec![c, qi(0), qi(1)]);
    }
    (p, roots.len())
}

/// Sign changes of `p` over the points `-1 + 2k/STURM_SAMPLES`, evaluated
/// exactly with integers: `s^d p(x/s)` has the sign of `p(x/s)`.
pub fn scan_sign_changes(p: &PolyQ) -> usize {
    let s = BigInt::from(STURM_SAMPLES / 2);
    let d = p.degree().unwrap();
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let scaled: Vec<BigInt> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (c * BigRational::from_integer(lcm.clone())).to_integer() * s.pow((d - k) as u32))
        .collect();
    let mut changes = 0;
    let mut last = 0i32;
    for k in -(STURM_SAMPLES / 2)..=(STURM_SAMPLES / 2) {
        let x = BigInt::from(k);
        let mut acc = scaled[d].clone();
        for c in scaled[..d].iter().rev() {
            acc = acc * &x + c;
        }
        let sg = if acc.is_zero() { 0 } else if acc.is_positive() { 1 } else { -1 };
        assert!(sg != 0, "sample hit a root");
        if last != 0 && sg != last {
            changes += 1;
        }
        last = sg;
    }
    changes
}

