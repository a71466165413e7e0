//! End-to-end acceptance checks. Each test prints one PASS line on success;
//! a failed assertion marks the criterion FAIL.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zeta_atlas::eval::{
    builtin_table, eval_zeta, eval_zeta_euler_maclaurin, eval_zeta_laurent, eval_zeta_prime,
    reflection_rhs, EvalConfig,
};
use zeta_atlas::pipeline::{run_scan, trace_config, ScanOptions, ScanRegion, ScanOutput};
use zeta_atlas::strips::{verify_lemma1, verify_lemma2};
use zeta_atlas::trace::{curve_min_distance, find_touch_radius, TouchOutcome};
use zeta_atlas::zeros::check_distinct_ordinates;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scan(t_max: f64, sigma_range: (f64, f64), max_step: f64) -> ScanOutput {
    let opts = ScanOptions {
        region: ScanRegion { sigma_range, t_range: (2.0, t_max), mirror: false },
        max_step,
        ..Default::default()
    };
    run_scan(&opts).expect("scan")
}

/// t ≤ 60 atlas shared by the topology criteria.
fn scan60() -> &'static ScanOutput {
    static S: OnceLock<ScanOutput> = OnceLock::new();
    S.get_or_init(|| scan(60.0, (-1.0, 10.0), 0.02))
}

/// Wider σ range so the Γ′ tangent probes at σ = 15 are attainable.
fn scan60_wide() -> &'static ScanOutput {
    static S: OnceLock<ScanOutput> = OnceLock::new();
    S.get_or_init(|| scan(60.0, (-1.0, 16.0), 0.05))
}

#[test]
fn criterion_01_evaluation_accuracy() {
    let start = Instant::now();
    let cfg = EvalConfig::default();
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    let z2 = eval_zeta(c(2.0, 0.0), &cfg).unwrap().value;
    let z0 = eval_zeta(c(0.0, 0.0), &cfg).unwrap().value;
    let d2 = (z2 - pi2_6).norm();
    let d0 = (z0 + 0.5).norm();
    let elapsed = start.elapsed();
    assert!(d2 < 1e-10, "zeta(2) off by {d2:e}");
    assert!(d0 < 1e-10, "zeta(0) off by {d0:e}");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "PASS criterion 1: |zeta(2)-pi^2/6| = {d2:.2e}, |zeta(0)+1/2| = {d0:.2e} in {:.3}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_functional_equation_grid() {
    let start = Instant::now();
    let cfg = EvalConfig::default();
    let mut max_res = 0.0f64;
    let mut points = 0usize;
    for i in 0..20 {
        let sigma = -3.0 + 7.0 * i as f64 / 19.0;
        for j in 0..10 {
            let t = 0.5 + 39.5 * j as f64 / 9.0;
            let s = c(sigma, t);
            let lhs = eval_zeta(s, &cfg).unwrap().value;
            let rhs = reflection_rhs(s, &cfg).unwrap().value;
            max_res = max_res.max((lhs - rhs).norm());
            points += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(points, 200);
    assert!(max_res < 1e-8, "max residual {max_res:e}");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "PASS criterion 2: functional-equation residual <= {max_res:.2e} on 200 points in {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_03_conjugate_symmetry_and_trivial_zeros() {
    let cfg = EvalConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut max_sym = 0.0f64;
    for _ in 0..500 {
        let s = c(rng.gen_range(-3.0..4.0), rng.gen_range(0.5..50.0));
        let a = eval_zeta(s.conj(), &cfg).unwrap().value;
        let b = eval_zeta(s, &cfg).unwrap().value.conj();
        max_sym = max_sym.max((a - b).norm());
    }
    assert!(max_sym < 1e-12, "symmetry defect {max_sym:e}");
    let mut max_triv = 0.0f64;
    for m in 1..=10 {
        let v = eval_zeta(c(-2.0 * m as f64, 0.0), &cfg).unwrap().value.norm();
        max_triv = max_triv.max(v);
    }
    assert!(max_triv < 1e-10, "trivial zero residual {max_triv:e}");
    println!(
        "PASS criterion 3: 500 symmetry checks <= {max_sym:.1e}, trivial zeros <= {max_triv:.2e}"
    );
}

/// Direct high-cutoff sums for the first two Stieltjes constants: the plain
/// partial sums converge like 1/(2m) and ln(m)/(2m), so m = 2·10^7 pins
/// gamma_0 to ~2.5e-8 and gamma_1 to ~4e-7 — enough margin for the targets.
fn stieltjes_oracle() -> (f64, f64) {
    let m = 20_000_000u64;
    let (mut s0, mut s1) = (0.0f64, 0.0f64);
    for k in 1..=m {
        let kf = k as f64;
        let lk = kf.ln();
        s0 += 1.0 / kf;
        s1 += lk / kf;
    }
    let lm = (m as f64).ln();
    (s0 - lm, s1 - lm * lm / 2.0)
}

#[test]
fn criterion_04_stieltjes_and_laurent() {
    let (g0_oracle, g1_oracle) = stieltjes_oracle();
    let table = builtin_table();
    let d0 = (table.gamma(0).unwrap() - g0_oracle).abs();
    let d1 = (table.gamma(1).unwrap() - g1_oracle).abs();
    assert!(d0 < 1e-6, "gamma_0 off by {d0:e}");
    assert!(d1 < 1e-5, "gamma_1 off by {d1:e}");

    let cfg = EvalConfig::default();
    let mut max_gap = 0.0f64;
    for i in 0..24 {
        let theta = std::f64::consts::TAU * i as f64 / 24.0;
        let s = c(1.0 + 0.3 * theta.cos(), 0.3 * theta.sin());
        let lau = eval_zeta_laurent(s, table, 12).unwrap().value;
        let direct = eval_zeta_euler_maclaurin(s, &cfg).unwrap().value;
        max_gap = max_gap.max((lau - direct).norm());
    }
    assert!(max_gap < 1e-7, "Laurent vs direct gap {max_gap:e}");
    println!(
        "PASS criterion 4: gamma_0 within {d0:.1e}, gamma_1 within {d1:.1e}, annulus gap {max_gap:.1e}"
    );
}

#[test]
fn criterion_05_zero_suite_to_110() {
    let start = Instant::now();
    // run_scan fails with a count mismatch unless the curve-based zero list
    // agrees exactly with the argument-principle count
    let out = scan(110.0, (-1.0, 10.0), 0.05);
    let elapsed = start.elapsed();
    assert!(out.zeros.len() >= 30, "only {} zeros", out.zeros.len());
    let max_dev = out
        .zeros
        .iter()
        .map(|z| (z.sigma - 0.5).abs())
        .fold(0.0f64, f64::max);
    assert!(max_dev < 1e-8, "critical-line deviation {max_dev:e}");
    let mut min_gap = f64::MAX;
    for w in out.zeros.windows(2) {
        assert!(w[1].t > w[0].t, "ordinates not increasing");
        min_gap = min_gap.min(w[1].t - w[0].t);
    }
    assert!(min_gap > 0.5, "min gap {min_gap}");
    assert!(out.zeros.iter().all(|z| z.local_order == 1));
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "PASS criterion 5: {} zeros to t = 110, line deviation {max_dev:.1e}, min gap {min_gap:.3}, all simple, {:.1}s",
        out.zeros.len(),
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_06_distinct_ordinates() {
    let out = scan60();
    let genuine = check_distinct_ordinates(&out.zeros, 0.5);
    assert!(genuine.pass, "offending pairs: {:?}", genuine.offending);

    // a synthetic duplicate ordinate must be caught
    let mut forged = out.zeros.clone();
    let mut dup = forged[0].clone();
    dup.sigma = 0.25;
    forged.push(dup);
    let caught = check_distinct_ordinates(&forged, 0.5);
    assert!(!caught.pass, "duplicate ordinate slipped through");
    assert_eq!(caught.offending.len(), 1);
    println!(
        "PASS criterion 6: {} ordinates distinct (gap > 0.5); synthetic duplicate rejected",
        out.zeros.len()
    );
}

#[test]
fn criterion_07_atlas_topology_to_60() {
    let out = scan60();
    let curves = &out.atlas.curves;
    let threshold = 10.0 * 0.02; // atlas traced with max_step = 0.02
    let mut min_same_kind = f64::MAX;
    let cfg = &out.eval_cfg;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let d = curve_min_distance(&curves[i], &curves[j]);
            if curves[i].kind == curves[j].kind {
                min_same_kind = min_same_kind.min(d);
                assert!(
                    d > threshold,
                    "curves {} and {} approach to {d:e}",
                    curves[i].id,
                    curves[j].id
                );
            } else if d <= threshold {
                // a Γ arc and a Γ′ arc may meet, but only at a point of the
                // ζ = 1 level set where the two pre-images join
                let ends = [
                    curves[i].first_sample().s,
                    curves[i].last_sample().s,
                    curves[j].first_sample().s,
                    curves[j].last_sample().s,
                ];
                let near_unit = ends
                    .iter()
                    .any(|&e| (eval_zeta(e, cfg).unwrap().value - 1.0).norm() < 1e-2);
                assert!(
                    near_unit,
                    "cross-kind curves {} and {} meet away from the unit level",
                    curves[i].id,
                    curves[j].id
                );
            }
        }
    }

    // each Γ owns exactly one zero; no zero sits on a Γ′
    let mut owners: BTreeMap<u32, usize> = BTreeMap::new();
    for z in &out.zeros {
        let id = z.owning_curve.expect("zero without owning curve");
        *owners.entry(id).or_default() += 1;
    }
    // partial strips may hold gamma arcs whose zero lies outside the window,
    // so the one-zero-per-gamma invariant is asserted over complete strips
    for strip in out.strips.iter().filter(|s| !s.partial) {
        for &id in &strip.gamma_components {
            assert_eq!(
                owners.get(&id).copied().unwrap_or(0),
                1,
                "gamma {id} does not own exactly one zero"
            );
        }
    }
    assert!(owners.values().all(|&n| n == 1), "some gamma owns multiple zeros");
    let mut min_prime = f64::MAX;
    for cv in out.atlas.gamma_primes() {
        for sm in &cv.samples {
            for z in &out.zeros {
                assert!((sm.s - z.s()).norm() > 1e-3, "zero on gamma-prime {}", cv.id);
            }
            min_prime = min_prime.min(eval_zeta_prime(sm.s, cfg).unwrap().value.norm());
        }
    }
    assert!(min_prime > 1e-6, "min |zeta'| on gamma-prime = {min_prime:e}");
    println!(
        "PASS criterion 7: same-kind separation >= {min_same_kind:.3} (> {threshold}), one zero per gamma, none on gamma-prime, min |zeta'| = {min_prime:.2e}"
    );
}

#[test]
fn criterion_08_lemma1_principal_tails() {
    let out = scan60();
    let mut checked = 0usize;
    for strip in &out.strips {
        let rep = verify_lemma1(strip, &out.atlas);
        assert!(rep.pass, "strip {} fails: {rep:?}", strip.j);
        if rep.applicable {
            checked += 1;
            assert!(rep.principal.is_some());
            assert_eq!(rep.right_escaping, 1);
        }
    }
    assert!(checked >= 5);
    println!(
        "PASS criterion 8: {checked} complete strips each hold exactly one tail-bounded principal"
    );
}

#[test]
fn criterion_09_lemma2_tangent_angles() {
    let out = scan60_wide();
    let probes = [5.0, 10.0, 15.0];
    let mut done = 0usize;
    let mut last_angles = Vec::new();
    for strip in out.strips.iter().filter(|s| !s.partial).take(5) {
        let rep = verify_lemma2(strip, &out.atlas, &probes).unwrap();
        assert!(rep.applicable);
        assert!(
            rep.pass,
            "strip {} angles not decreasing below 0.05: {:?}",
            strip.j, rep.angles
        );
        last_angles = rep.angles.clone();
        done += 1;
    }
    assert_eq!(done, 5);
    println!(
        "PASS criterion 9: tangent angles decrease across probes sigma = 5, 10, 15 for 5 strips (last strip: {:?})",
        last_angles
            .iter()
            .map(|a| format!("{a:.2e}"))
            .collect::<Vec<_>>()
    );
}

#[test]
fn criterion_10_m_type_census_to_300() {
    let start = Instant::now();
    let out = scan(300.0, (-0.5, 10.0), 0.05);
    let elapsed = start.elapsed();

    let complete_sum: usize = out
        .strips
        .iter()
        .filter(|s| !s.partial)
        .map(|s| s.m_type)
        .sum();
    let partial_zeros: usize = out
        .strips
        .iter()
        .filter(|s| s.partial)
        .map(|s| s.zeros.len())
        .sum();
    assert_eq!(
        complete_sum + partial_zeros,
        out.zeros.len(),
        "census does not account for every zero"
    );

    let histogram = zeta_atlas::strips::m_type_histogram(&out.strips);
    assert!(histogram.keys().any(|&m| m >= 2), "no m >= 2 strip found");
    let first_multi = out
        .strips
        .iter()
        .find(|s| !s.partial && s.m_type >= 2)
        .expect("m >= 2 strip");
    assert!(elapsed.as_secs_f64() < 900.0, "took {elapsed:?}");
    println!(
        "PASS criterion 10: {} zeros to t = 300, histogram {:?}, first m >= 2 strip j = {} over t in {:?}, {:.1}s",
        out.zeros.len(),
        histogram,
        first_multi.j,
        first_multi.t_extent,
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_11_deterministic_verify() {
    let bin = env!("CARGO_BIN_EXE_zeta-atlas");
    let mut digests: Vec<BTreeMap<String, String>> = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let status = std::process::Command::new(bin)
            .args(["verify", "--t-max", "40", "--out"])
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success(), "verify run failed");
        let mut run: BTreeMap<String, String> = BTreeMap::new();
        for entry in std::fs::read_dir(dir.path()).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().to_string();
            if name == "manifest.json" {
                // timestamps live here; its file-digest table is compared below
                let doc: serde_json::Value =
                    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
                run.insert(
                    "manifest.file_digests".into(),
                    doc["file_digests"].to_string(),
                );
                continue;
            }
            let bytes = std::fs::read(&path).unwrap();
            run.insert(name, zeta_atlas::export::sha256_hex(&bytes));
        }
        digests.push(run);
    }
    assert_eq!(digests[0], digests[1], "verify output not reproducible");
    assert!(digests[0].len() >= 3);
    println!(
        "PASS criterion 11: two verify runs agree on {} output digests",
        digests[0].len()
    );
}

/// The two zeros of the first 2-type strip (t ≈ 21.0 and 25.0) share a strip,
/// so the circle pre-images around them must meet at some radius r0 < 1, at a
/// point where ζ′ vanishes and |ζ| = r0.
#[test]
fn touch_radius_first_shared_strip() {
    let out = scan60();
    let za = out.zeros.iter().find(|z| (z.t - 21.0).abs() < 0.5).unwrap();
    let zb = out.zeros.iter().find(|z| (z.t - 25.0).abs() < 0.5).unwrap();
    let opts = ScanOptions {
        region: ScanRegion { sigma_range: (-1.0, 10.0), t_range: (16.0, 29.0), mirror: false },
        ..Default::default()
    };
    let tcfg = trace_config(&opts);
    match find_touch_radius(za.s(), zb.s(), &tcfg).unwrap() {
        TouchOutcome::Touch { r0, touch_point } => {
            assert!(r0 > 0.0 && r0 < 1.0, "r0 = {r0}");
            let p = touch_point.expect("touch point");
            let dz = eval_zeta_prime(p, &out.eval_cfg).unwrap().value.norm();
            assert!(dz < 1e-6, "|zeta'| at touch point = {dz:e}");
            let z = eval_zeta(p, &out.eval_cfg).unwrap().value.norm();
            assert!((z - r0).abs() < 1e-3, "|zeta| = {z} vs r0 = {r0}");
            println!(
                "PASS touch radius: circles around t = 21.0 and 25.0 meet at r0 = {r0:.6} where |zeta'| = {dz:.1e}"
            );
        }
        TouchOutcome::NoTouch => panic!("expected the shared-strip pair to touch"),
    }
}
