//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p medianosc --test acceptance -- --nocapture` to see
//! every line; any failed criterion fails its test.

use medianosc::bmo::{
    bmo_phi_norm, fit_tail_curve, jn_tail, vmo_embeds_in_vmo_check, vmo_modulus, Modulus,
};
use medianosc::corpus::{pair_counterexample, Corpus, CorpusSpec};
use medianosc::decompose::{
    stromberg_decompose, two_threshold_decompose, DecompositionParams,
};
use medianosc::grid::CubeFamily;
use medianosc::median::{
    maximal_median, median_convergence_profile, WeightedSamples,
};
use medianosc::oscillation::{essential_modulus, omega_estimate, PairFamily};
use medianosc::props::{run_suite, Suite};
use medianosc::sharp::local_sharp_maximal;
use medianosc::SampledFunction;
use std::time::Instant;

fn report(number: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {number:02} {name}: {status} ({detail})");
    assert!(ok, "criterion {number} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_median_algebra() {
    let start = Instant::now();
    let r = run_suite(Suite::MedianAlgebra, 1000, 0xA11CE);
    let elapsed = start.elapsed();
    let ok = r.passed() && elapsed.as_secs() < 60;
    report(
        1,
        "median-algebra-1000-cases",
        ok,
        &format!(
            "{} checks, {} violations, {:?}{}",
            r.checks,
            r.violations.len(),
            elapsed,
            r.violations
                .first()
                .map(|v| format!("; first: {} case {}: {}", v.property, v.case, v.detail))
                .unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_02_median_rearrangement_identity() {
    let r = run_suite(Suite::RearrangementIdentity, 1000, 0xB0B);
    report(
        2,
        "median-rearrangement-identity",
        r.passed(),
        &format!(
            "{} checks, {} boundary cases excluded by redraw, {} violations",
            r.checks,
            r.boundary_redraws,
            r.violations.len()
        ),
    );
}

#[test]
fn criterion_03_counterexamples() {
    // the asymmetric step: biased medians of f and |f| split at every s < 1/2
    let mut ok = true;
    let mut detail = String::new();
    let spec = CorpusSpec { corpus: Corpus::PaperStep, dim: 1, n_side: 64, seed: 0 };
    let f = spec.generate().unwrap();
    let samples = WeightedSamples::from_region(&f, &f.full_region());
    let abs = samples.map(f64::abs).unwrap();
    for s in [0.1, 0.25, 0.4] {
        let m = maximal_median(&samples, s).unwrap();
        let ma = maximal_median(&abs, s).unwrap();
        if m != -2.0 || ma != 1.0 {
            ok = false;
            detail = format!("s={s}: median {m} (want -2), |median| {ma} (want 1)");
        }
    }

    // the strict indicator pair: zero biased medians, unit sum median at the
    // discrete boundary parameter
    let pair = pair_counterexample(0.75, 0.75, 16).unwrap();
    let fs = WeightedSamples::from_region(&pair.f, &pair.f.full_region());
    let gs = WeightedSamples::from_region(&pair.g, &pair.g.full_region());
    let sum = WeightedSamples::new(
        pair.f
            .values()
            .iter()
            .zip(pair.g.values())
            .map(|(a, b)| a + b)
            .collect(),
        fs.cell_volume(),
    )
    .unwrap();
    let mf = maximal_median(&fs, 0.75).unwrap();
    let mg = maximal_median(&gs, 0.75).unwrap();
    let msum = maximal_median(&sum, pair.t_boundary).unwrap();
    if mf != 0.0 || mg != 0.0 || msum != 1.0 {
        ok = false;
        detail = format!("pair: {mf}, {mg}, sum {msum} at t={}", pair.t_boundary);
    }
    if detail.is_empty() {
        detail = format!(
            "asymmetric step exact at s in {{.1,.25,.4}}; pair medians 0,0 and sum 1 at t={}",
            pair.t_boundary
        );
    }
    report(3, "paper-counterexamples", ok, &detail);
}

#[test]
fn criterion_04_best_constant_oracles() {
    let w = run_suite(Suite::WindowOracle, 500, 0xC4);
    let p = run_suite(Suite::PairOracle, 500, 0xC5);
    report(
        4,
        "best-constant-oracles",
        w.passed() && p.passed(),
        &format!(
            "window: {} checks {} violations; pair: {} checks {} violations",
            w.checks,
            w.violations.len(),
            p.checks,
            p.violations.len()
        ),
    );
}

#[test]
fn criterion_05_sharp_field_lemmas() {
    let r = run_suite(Suite::SharpBounds, 200, 0x1E44A);
    report(
        5,
        "sharp-field-lemmas-200-fields",
        r.passed(),
        &format!(
            "{} checks, {} violations{}",
            r.checks,
            r.violations.len(),
            r.violations
                .first()
                .map(|v| format!("; first: {} case {}: {}", v.property, v.case, v.detail))
                .unwrap_or_default()
        ),
    );
}

fn corpus_members() -> Vec<(String, SampledFunction)> {
    let mut members = Vec::new();
    let specs_1d = [
        ("step", Corpus::Step),
        ("paper-step", Corpus::PaperStep),
        ("linear", Corpus::Linear),
        ("lipschitz", Corpus::Lipschitz { l: 2.0 }),
        ("spike", Corpus::Spike { width: 2 }),
        ("log-singularity", Corpus::LogSingularity { center: 0.5 }),
        ("piecewise", Corpus::Piecewise { levels: 4 }),
        ("checkerboard", Corpus::Checkerboard { block: 8 }),
    ];
    for (name, corpus) in specs_1d {
        let spec = CorpusSpec { corpus, dim: 1, n_side: 64, seed: 7 };
        members.push((format!("{name}-1d"), spec.generate().unwrap()));
    }
    let specs_2d = [
        ("step", Corpus::Step),
        ("spike", Corpus::Spike { width: 2 }),
        ("piecewise", Corpus::Piecewise { levels: 4 }),
        ("checkerboard", Corpus::Checkerboard { block: 4 }),
    ];
    for (name, corpus) in specs_2d {
        let spec = CorpusSpec { corpus, dim: 2, n_side: 16, seed: 7 };
        members.push((format!("{name}-2d"), spec.generate().unwrap()));
    }
    members
}

#[test]
fn criterion_06_decomposition_postconditions() {
    let mut runs = 0usize;
    let mut ok = true;
    let mut detail = String::new();
    let t = 0.5;

    for (name, f) in corpus_members() {
        let root = f.full_region();
        let lo = f.values().iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let range = (hi - lo).max(1e-9);
        for s in [0.125, 0.25, 0.5] {
            let family = CubeFamily::default_for(f.dim(), f.cells_per_side());
            // center as the two-threshold construction does, so the
            // hypothesis holds for every parameter combination
            let samples = WeightedSamples::from_region(&f, &root);
            let med = maximal_median(&samples, t).unwrap();
            let g = f.map(|v| v - med).unwrap();
            let sharp = local_sharp_maximal(&g, &root, s, family).unwrap();
            for delta_scale in [0.01, 0.1, 1.0] {
                for beta_scale in [0.1, 1.0, 10.0] {
                    let params = DecompositionParams::new(
                        s,
                        t,
                        delta_scale * range,
                        beta_scale * range,
                    )
                    .unwrap();
                    let forest = stromberg_decompose(&g, &root, params, &sharp).unwrap();
                    runs += 1;
                    let r = &forest.report;
                    if !(r.condition1_ok && r.condition2_ok && r.condition3_ok) {
                        ok = false;
                        detail = format!(
                            "{name} s={s} delta={} beta={}: c1={} c2={} ({} bad) c3={}",
                            params.delta,
                            params.beta,
                            r.condition1_ok,
                            r.condition2_ok,
                            r.condition2_violations,
                            r.condition3_ok
                        );
                    }
                }
            }
        }
    }

    // two-threshold packing on the designated members
    let designated = [
        ("step-1d", CorpusSpec { corpus: Corpus::Step, dim: 1, n_side: 64, seed: 7 }),
        (
            "piecewise4-1d",
            CorpusSpec { corpus: Corpus::Piecewise { levels: 4 }, dim: 1, n_side: 64, seed: 7 },
        ),
        (
            "spike-block-2d",
            CorpusSpec { corpus: Corpus::Spike { width: 2 }, dim: 2, n_side: 16, seed: 7 },
        ),
    ];
    let mut packings = Vec::new();
    for (name, spec) in designated {
        let f = spec.generate().unwrap();
        let root = f.full_region();
        for s in [0.125, 0.25, 0.5] {
            let family = CubeFamily::default_for(f.dim(), f.cells_per_side());
            let samples = WeightedSamples::from_region(&f, &root);
            let med = maximal_median(&samples, 0.5).unwrap();
            let g = f.map(|v| v - med).unwrap();
            let sharp_max = local_sharp_maximal(&g, &root, s, family).unwrap().max();
            let beta = sharp_max.max(1e-12);
            let out = two_threshold_decompose(&f, &root, s, t, beta, beta / 10.0, Some(family))
                .unwrap();
            runs += 1;
            packings.push(format!("{name}@{s}={:.4}", out.packing));
            if !(out.packing <= s && out.nesting_ok) {
                ok = false;
                detail = format!(
                    "{name} s={s}: packing {} (cap {s}), nesting {}",
                    out.packing, out.nesting_ok
                );
            }
        }
    }

    if detail.is_empty() {
        detail = format!("{runs} runs clean; packing {}", packings.join(" "));
    }
    report(6, "decomposition-postconditions", ok, &detail);
}

#[test]
fn criterion_07_tail_decay() {
    let start = Instant::now();
    let spec =
        CorpusSpec { corpus: Corpus::LogSingularity { center: 0.5 }, dim: 1, n_side: 4096, seed: 0 };
    let f = spec.generate().unwrap();
    let region = f.full_region();
    let phi = Modulus::constant(1.0).unwrap();
    let grid: Vec<f64> = (1..=120).map(|i| 0.1 * i as f64).collect();
    let curve = jn_tail(&f, &region, 0.25, &grid, &phi, CubeFamily::DyadicShifted).unwrap();
    let fit = fit_tail_curve(&curve, &phi, region.measure(), 1, (1e-3, 1e-1)).unwrap();
    let elapsed = start.elapsed();
    let ok = fit.slope < 0.0 && fit.r_squared >= 0.9 && elapsed.as_secs() < 300;
    report(
        7,
        "tail-decay-log-singularity",
        ok,
        &format!(
            "slope {:.4}, R^2 {:.4}, c1 {:.4}, c2 {:.4} (reference {:.4}), {} points, {:?}",
            fit.slope, fit.r_squared, fit.c1, fit.c2, fit.reference_c2, fit.points_used, elapsed
        ),
    );
}

#[test]
fn criterion_08_two_cube_convergence() {
    let delta = 0.05;
    let s = 0.75;
    let mut ok = true;
    let mut detail = String::new();
    let mut summary = Vec::new();
    for (name, corpus) in [("step", Corpus::Step), ("lipschitz", Corpus::Lipschitz { l: 2.0 })] {
        let mut prev = 0.0;
        for n in [256usize, 512, 1024] {
            let spec = CorpusSpec { corpus: corpus.clone(), dim: 1, n_side: n, seed: 0 };
            let f = spec.generate().unwrap();
            let estimate = omega_estimate(&f, s, delta, PairFamily::DyadicMenu).unwrap();
            let modulus = essential_modulus(&f, delta).unwrap();
            let ratio = estimate / (modulus / 2.0);
            // the easy direction is exact at every resolution
            if estimate > modulus / 2.0 {
                ok = false;
                detail = format!("{name} N={n}: estimate {estimate} above modulus/2");
            }
            if n == 1024 && !(0.8..=1.0 + 1e-12).contains(&ratio) {
                ok = false;
                detail = format!("{name} N=1024: ratio {ratio} outside [0.8, 1]");
            }
            if ratio + 1e-12 < prev {
                ok = false;
                detail = format!("{name} N={n}: ratio {ratio} dropped below {prev}");
            }
            prev = ratio;
            if n == 1024 {
                summary.push(format!("{name}: ratio {ratio:.4}"));
            }
        }
    }
    if detail.is_empty() {
        detail = summary.join(", ");
    }
    report(8, "two-cube-convergence", ok, &detail);
}

#[test]
fn criterion_09_median_convergence_profiles() {
    let mut ok = true;
    let mut detail = String::new();
    let mut towers = 0usize;

    let l = 2.0;
    let spec = CorpusSpec { corpus: Corpus::Lipschitz { l }, dim: 1, n_side: 256, seed: 0 };
    let f = spec.generate().unwrap();
    for cell in 0..256usize {
        for s in [0.25, 0.5, 0.75] {
            let profile = median_convergence_profile(&f, &[cell], s).unwrap();
            towers += 1;
            for p in &profile {
                if p.error > l * p.diameter + 1e-12 {
                    ok = false;
                    detail = format!(
                        "1d cell {cell} s={s} level {}: error {} above {}",
                        p.level,
                        p.error,
                        l * p.diameter
                    );
                }
            }
            if profile.last().unwrap().error != 0.0 {
                ok = false;
                detail = format!("1d cell {cell} s={s}: single-cell error nonzero");
            }
        }
    }

    let spec2 = CorpusSpec { corpus: Corpus::Lipschitz { l }, dim: 2, n_side: 32, seed: 0 };
    let f2 = spec2.generate().unwrap();
    for x in 0..32usize {
        for y in 0..32usize {
            for s in [0.25, 0.5, 0.75] {
                let profile = median_convergence_profile(&f2, &[x, y], s).unwrap();
                towers += 1;
                for p in &profile {
                    if p.error > l * p.diameter + 1e-12 {
                        ok = false;
                        detail = format!(
                            "2d cell ({x},{y}) s={s} level {}: error {} above {}",
                            p.level,
                            p.error,
                            l * p.diameter
                        );
                    }
                }
                if profile.last().unwrap().error != 0.0 {
                    ok = false;
                    detail = format!("2d cell ({x},{y}) s={s}: single-cell error nonzero");
                }
            }
        }
    }

    if detail.is_empty() {
        detail = format!("{towers} towers within the Lipschitz bound, exact at the floor");
    }
    report(9, "median-convergence-profiles", ok, &detail);
}

#[test]
fn criterion_10_vanishing_oscillation_discriminator() {
    let n = 256usize;
    let s = 0.25;
    let cell_volume = 1.0 / n as f64;
    let u_grid: Vec<f64> = (0..=8).map(|k| (1 << k) as f64 * cell_volume).collect();
    let mut ok = true;
    let mut detail = String::new();

    // Lipschitz field: the modulus decays below two cell-Lipschitz units
    let l = 3.0;
    let lip = CorpusSpec { corpus: Corpus::Lipschitz { l }, dim: 1, n_side: n, seed: 0 }
        .generate()
        .unwrap();
    let region = lip.full_region();
    let points = vmo_modulus(&lip, &region, s, &u_grid, CubeFamily::All).unwrap();
    let finest = points.first().unwrap();
    if finest.phi_s >= 2.0 * l * cell_volume {
        ok = false;
        detail = format!("lipschitz finest phi_s {} not below {}", finest.phi_s, 2.0 * l * cell_volume);
    }
    for w in points.windows(2) {
        if w[0].phi_s > w[1].phi_s {
            ok = false;
            detail = "lipschitz modulus not nondecreasing".into();
        }
    }

    // step field: the modulus stays put above a few cells
    let step = CorpusSpec { corpus: Corpus::Step, dim: 1, n_side: n, seed: 0 }
        .generate()
        .unwrap();
    let points = vmo_modulus(&step, &step.full_region(), s, &u_grid, CubeFamily::All).unwrap();
    for p in points.iter().filter(|p| p.u > 4.0 * cell_volume) {
        if p.phi_s < 0.4 {
            ok = false;
            detail = format!("step phi_s({}) = {} below 0.4", p.u, p.phi_s);
        }
    }

    // embedding constants against moduli matched to each class
    let phi_linear = Modulus::power(1.0, 1.0).unwrap();
    let emb_lip =
        vmo_embeds_in_vmo_check(&lip, &region, s, &phi_linear, &u_grid, CubeFamily::All).unwrap();
    if emb_lip.max_ratio > l / 4.0 {
        ok = false;
        detail = format!("lipschitz embedding ratio {} above {}", emb_lip.max_ratio, l / 4.0);
    }
    let phi_const = Modulus::constant(1.0).unwrap();
    let emb_step = vmo_embeds_in_vmo_check(
        &step,
        &step.full_region(),
        s,
        &phi_const,
        &u_grid,
        CubeFamily::All,
    )
    .unwrap();
    if emb_step.max_ratio > 1.0 {
        ok = false;
        detail = format!("step embedding ratio {} above 1", emb_step.max_ratio);
    }

    // the norm itself separates the classes at this resolution
    let norm_step =
        bmo_phi_norm(&step, &step.full_region(), s, &phi_const, CubeFamily::All).unwrap();
    if norm_step != 0.5 {
        ok = false;
        detail = format!("step norm {norm_step} (want 1/2)");
    }

    if detail.is_empty() {
        detail = format!(
            "lipschitz finest {:.5}, step plateau 0.5, embedding ratios {:.3}/{:.3}",
            finest.phi_s, emb_lip.max_ratio, emb_step.max_ratio
        );
    }
    report(10, "vanishing-oscillation-discriminator", ok, &detail);
}
