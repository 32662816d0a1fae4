//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs under `cargo test` as a harness-less test target.

use std::process::ExitCode;
use std::time::Instant;

mod common;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::SeedableRng;

use unimodular_secrecy::catalog::{catalog_all, catalog_entry, catalog_extremal, EXTREMAL_DIMS};
use unimodular_secrecy::lattice::{e8_cartan, enumerate_counts, GramMatrix};
use unimodular_secrecy::qseries::{extremal_b_coeffs, fit_a_basis};
use unimodular_secrecy::rat::{q, qi};
use unimodular_secrecy::secrecy::{denom_from_ar, denom_from_bj, gain_at_one, xi_direct, xi_poly};
use unimodular_secrecy::theta_numeric::{check_transform_identities, z_of_y};
use unimodular_secrecy::verifier::{isolate_roots, sturm_count, verify_min_at_quarter, VerdictStatus};

// tolerances, fixed up front
const TABLE_BUDGET_S: f64 = 5.0;
const THEOREM_BUDGET_S: f64 = 5.0;
const ROOT_TOL: f64 = 5e-4;
const ROOT_WIDTH: (i64, i64) = (1, 100_000);
const Z_AT_ONE_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-12;
const ROUTE_TOL: f64 = 1e-8;
const PRECISION: f64 = 1e-12;
const STURM_POLYS: usize = 200;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_table() -> Outcome {
    let t = Instant::now();
    for n in EXTREMAL_DIMS {
        let expected = catalog_extremal(n).map_err(|e| e.to_string())?.expected_d;
        let b = extremal_b_coeffs(n).map_err(|e| e.to_string())?;
        let got = denom_from_bj(&b.coeffs);
        ensure(got == expected, || format!("dim {n}: {got} != {expected}"))?;
    }
    let s = t.elapsed().as_secs_f64();
    ensure(s < TABLE_BUDGET_S, || format!("took {s:.2} s"))?;
    Ok(format!("10 rows exact in {s:.3} s"))
}

fn c2_theorem() -> Outcome {
    let t = Instant::now();
    for n in EXTREMAL_DIMS {
        let d = catalog_extremal(n).map_err(|e| e.to_string())?.expected_d;
        let v = verify_min_at_quarter(&d).map_err(|e| e.to_string())?;
        ensure(v.status == VerdictStatus::ConfirmedStrict, || {
            format!("dim {n}: {}", v.status)
        })?;
    }
    let s = t.elapsed().as_secs_f64();
    ensure(s < THEOREM_BUDGET_S, || format!("took {s:.2} s"))?;
    Ok(format!("10/10 ConfirmedStrict in {s:.3} s"))
}

fn c3_derivative_roots() -> Outcome {
    let cases: [(usize, &[f64]); 2] = [(72, &[0.3002, 0.5222]), (80, &[0.2889, 0.4491, 0.8620])];
    let width = q(ROOT_WIDTH.0, ROOT_WIDTH.1);
    let mut detail = Vec::new();
    for (n, expected) in cases {
        let dp = catalog_extremal(n).map_err(|e| e.to_string())?.expected_d.derivative();
        let count = sturm_count(&dp, &qi(0), &qi(1)).map_err(|e| e.to_string())?;
        ensure(count == expected.len(), || format!("dim {n}: {count} roots in (0, 1)"))?;
        let ivs = isolate_roots(&dp, &qi(0), &qi(1), &width).map_err(|e| e.to_string())?;
        ensure(ivs.len() == expected.len(), || format!("dim {n}: {} intervals", ivs.len()))?;
        for (iv, &x) in ivs.iter().zip(expected) {
            let mid = iv.midpoint().to_f64().unwrap();
            ensure((mid - x).abs() < ROOT_TOL, || format!("dim {n}: root {mid} vs {x}"))?;
            detail.push(format!("{mid:.4}"));
        }
    }
    Ok(format!("roots {}", detail.join(" ")))
}

fn c4_z_range() -> Outcome {
    let z1 = z_of_y(1.0, PRECISION).map_err(|e| e.to_string())?;
    ensure((z1 - 0.25).abs() < Z_AT_ONE_TOL, || format!("z(1) = {z1}"))?;
    // 200 log-spaced samples on [0.05, 20], plus y = 1 itself
    let (lo, hi) = (0.05f64, 20.0f64);
    let mut grid: Vec<f64> = (0..200)
        .map(|i| lo * (hi / lo).powf(i as f64 / 199.0))
        .collect();
    grid.push(1.0);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &y in &grid {
        let z = z_of_y(y, PRECISION).map_err(|e| e.to_string())?;
        ensure(z <= 0.25, || format!("z({y}) = {z} > 1/4"))?;
        if z > best.0 {
            best = (z, y);
        }
    }
    ensure(best.1 == 1.0, || format!("argmax at y = {}", best.1))?;
    Ok(format!("z(1) = {z1}, max over {} samples at y = 1", grid.len()))
}

fn c5_symmetry() -> Outcome {
    let mut worst_sym = 0.0f64;
    let mut worst_id = 0.0f64;
    for y in [1.1, 1.7, 2.5, 5.0] {
        let a = z_of_y(y, PRECISION).map_err(|e| e.to_string())?;
        let b = z_of_y(1.0 / y, PRECISION).map_err(|e| e.to_string())?;
        worst_sym = worst_sym.max((a - b).abs());
        let r = check_transform_identities(y, PRECISION).map_err(|e| e.to_string())?;
        worst_id = worst_id.max(r.max());
    }
    ensure(worst_sym < SYMMETRY_TOL, || format!("symmetry residual {worst_sym:e}"))?;
    ensure(worst_id < IDENTITY_TOL, || format!("identity residual {worst_id:e}"))?;
    Ok(format!("symmetry {worst_sym:.1e}, identities {worst_id:.1e}"))
}

fn c6_e8() -> Outcome {
    let cartan = e8_cartan();
    let theta = enumerate_counts(&cartan, 4).map_err(|e| e.to_string())?;
    let n2 = theta.counts()[2].clone();
    ensure(n2 == BigInt::from(240), || format!("enumerated N2 = {n2}"))?;
    // In the weight basis the inverse Gram is the Cartan matrix, whose
    // diagonal 2 bounds |c_i| ≤ √(2·2) = 2 for norm 2.
    let weights = GramMatrix::new(common::unimodular_inverse(&cartan)).map_err(|e| e.to_string())?;
    let boxed = common::box_counts(&weights, 2, 2)[2];
    ensure(boxed == 240, || format!("box oracle N2 = {boxed}"))?;
    let fp = enumerate_counts(&weights, 2).map_err(|e| e.to_string())?;
    ensure(fp.counts()[2] == BigInt::from(240), || "weight-basis enumeration".into())?;

    let a = fit_a_basis(&theta, 8).map_err(|e| e.to_string())?;
    ensure(a.a() == [qi(1), qi(-16)], || format!("a = {:?}", a.a()))?;
    let d = denom_from_ar(&a);
    let gain = gain_at_one(&d).map_err(|e| e.to_string())?;
    ensure(gain == q(4, 3), || format!("gain = {gain}"))?;
    let mut worst = 0.0f64;
    for y in [0.5, 1.0, 2.0] {
        let x = xi_direct(&theta, 8, y, PRECISION).map_err(|e| e.to_string())?;
        let p = xi_poly(&d, y, PRECISION).map_err(|e| e.to_string())?;
        worst = worst.max((x - p).abs());
    }
    ensure(worst < ROUTE_TOL, || format!("route gap {worst:e}"))?;
    Ok(format!("N2 = 240 (box {boxed}), a = [1, -16], gain 4/3, gap {worst:.1e}"))
}

fn c7_leech() -> Outcome {
    let d = catalog_extremal(24).map_err(|e| e.to_string())?.expected_d;
    let g = gain_at_one(&d).map_err(|e| e.to_string())?;
    ensure(g == q(256, 63), || format!("gain = {g}"))?;
    Ok("gain 256/63".into())
}

fn c8_refutation() -> Outcome {
    let d = catalog_entry("refuted-fixture").map_err(|e| e.to_string())?.expected_d;
    let v = verify_min_at_quarter(&d).map_err(|e| e.to_string())?;
    ensure(v.status == VerdictStatus::Refuted, || format!("status {}", v.status))?;
    let w = v.witnesses.first().ok_or("no witness")?;
    ensure(w.interval.contains(&q(1, 8)), || format!("witness {}", w.interval))?;
    let dq = d.eval(&q(1, 4));
    ensure(d.eval(&w.probe) < dq, || "D(probe) >= D(1/4)".into())?;
    ensure(w.interval.lo <= w.probe && w.probe <= w.interval.hi, || "probe outside".into())?;
    Ok(format!("Refuted, witness {} contains 1/8", w.interval))
}

fn c9_sturm_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut total = 0;
    for i in 0..STURM_POLYS {
        let (p, real_roots) = common::random_poly(&mut rng);
        let sturm = sturm_count(&p, &qi(-1), &qi(1)).map_err(|e| e.to_string())?;
        let scan = common::scan_sign_changes(&p);
        ensure(sturm == scan && scan == real_roots, || {
            format!("poly {i}: sturm {sturm}, scan {scan}, constructed {real_roots}")
        })?;
        total += sturm;
    }
    Ok(format!("{STURM_POLYS} polynomials, {total} roots, all counts agree"))
}

fn c10_routes() -> Outcome {
    let ys = [0.5, 0.8, 1.0, 1.3, 2.0];
    let mut worst = 0.0f64;
    let mut lattices = 0;
    for e in catalog_all().into_iter().filter(|e| e.is_lattice) {
        let theta = e
            .theta_coefficients(e.n / 8 + 3)
            .map_err(|err| err.to_string())?
            .ok_or("missing theta")?;
        for y in ys {
            let a = xi_direct(&theta, e.n, y, PRECISION).map_err(|err| err.to_string())?;
            let b = xi_poly(&e.expected_d, y, PRECISION).map_err(|err| err.to_string())?;
            let gap = (a - b).abs();
            ensure(gap < ROUTE_TOL, || format!("{} at y = {y}: gap {gap:e}", e.name))?;
            worst = worst.max(gap);
        }
        lattices += 1;
    }
    Ok(format!("{lattices} lattices x 5 points, worst gap {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("table regeneration", c1_table),
        ("extremal maxima at y = 1", c2_theorem),
        ("derivative roots 72/80", c3_derivative_roots),
        ("z range and argmax", c4_z_range),
        ("z symmetry and identities", c5_symmetry),
        ("E8 end to end", c6_e8),
        ("Leech gain", c7_leech),
        ("refutation path", c8_refutation),
        ("Sturm vs sign scan", c9_sturm_oracle),
        ("route agreement", c10_routes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
