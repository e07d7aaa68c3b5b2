//! Acceptance battery: ten end-to-end criteria, one test each, covering
//! exact example values, finite-difference fidelity, the hypersurface
//! threshold, the equality case, universal inequalities, implication
//! suites, sign equivalence, determinism, and the negative control.
//!
//! Each test prints one `ACCEPTANCE NN ...: PASS` line when it reaches the
//! end; tolerances and runtime caps are pinned here, not configurable.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use pinchlab::curvature::{
    gauss_curvature, mean_curvature, pinching_bound, rotate_sff, sectional, theta_p, AmbientSpace,
    SecondFundamentalForm,
};
use pinchlab::fourdim::{bochner_matrix, sd_asd_spectra};
use pinchlab::harness::{
    certify_nnic, certify_prop_ell, certify_star, StarSffSampler, Tolerances,
};
use pinchlab::immersion::{
    gen_cp2, gen_product_spheres, gen_sphere, gen_veronese, pointwise_sff, sample_points,
    ImmersionChart,
};
use pinchlab::linalg::{derive_seed, haar_frame, rng_from_seed};
use pinchlab::report::strip_volatile;
use pinchlab::search::{k_min, min_isotropic, sup_theta, SearchConfig};

fn search(restarts: usize, oracle_samples: usize, seed: u64) -> SearchConfig {
    SearchConfig { restarts, max_iters: 300, oracle_samples, seed, ..SearchConfig::default() }
}

#[test]
fn acceptance_01_sphere_battery() {
    let t0 = Instant::now();
    let amb = AmbientSpace::euclidean();
    for n in 4..=9 {
        let sff = SecondFundamentalForm::round_sphere(n, 1.0).unwrap();
        let star = certify_star(&sff, &amb, &search(16, 5000, n as u64)).unwrap();
        assert!((star.k_min - 1.0).abs() <= 1e-9, "n={n}: k_min {}", star.k_min);
        assert!((star.h - 1.0).abs() <= 1e-12, "n={n}: h {}", star.h);
        let expected = 1.0 - pinching_bound(n, 1.0, 0.0).unwrap();
        assert!(
            (star.margin - expected).abs() <= 1e-9,
            "n={n}: margin {} vs expected {expected}",
            star.margin
        );
        match n {
            4 => assert!((star.margin - 2.0 / 3.0).abs() <= 1e-9),
            8 => assert!(star.margin.abs() <= 1e-9, "n=8 margin must vanish: {}", star.margin),
            9 => {
                assert!((star.margin + 0.125).abs() <= 1e-9);
                assert!(star.margin < -1e-6, "n=9 must be flagged as a violation");
            }
            _ => assert!(star.margin > 0.0),
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "sphere battery took {elapsed:.1}s");
    println!("ACCEPTANCE 01 sphere battery n=4..9 exact margins: PASS");
}

#[test]
fn acceptance_02_finite_difference_fidelity() {
    let t0 = Instant::now();
    let chart = gen_sphere(4, 2.0).unwrap();
    let points = sample_points(&chart, 100);

    // Umbilic closed form in any orthonormal tangent frame with the inward
    // normal: alpha_ij = (1/r) delta_ij = 0.5 delta_ij.
    let worst = |chart: &ImmersionChart, pts: &[Vec<f64>]| -> f64 {
        pts.par_iter()
            .map(|u| {
                let pd = pointwise_sff(chart, u).unwrap();
                let mut w = 0.0f64;
                for i in 0..4 {
                    for j in 0..4 {
                        let want = if i == j { 0.5 } else { 0.0 };
                        w = w.max((pd.sff.get(0, i, j) - want).abs());
                    }
                }
                w
            })
            .reduce(|| 0.0, f64::max)
    };

    let default_err = worst(&chart, &points);
    assert!(default_err <= 1e-5, "worst entrywise error {default_err:.3e} at the default step");

    // Halving in the truncation-dominated regime (larger steps sit above
    // the roundoff floor the default step already reaches).
    let coarse = worst(&chart.clone().with_fd_step(5e-2).unwrap(), &points);
    let fine = worst(&chart.clone().with_fd_step(2.5e-2).unwrap(), &points);
    assert!(
        fine * 3.0 <= coarse,
        "halving must improve the worst error at least threefold: {coarse:.3e} -> {fine:.3e}"
    );

    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "fidelity check took {elapsed:.1}s");
    println!("ACCEPTANCE 02 finite-difference fidelity on S^4(2): PASS");
}

#[test]
fn acceptance_03_ellipsoid_threshold() {
    let t0 = Instant::now();
    let eps = 3f64.powf(1.0 / 6.0);
    let axes = [1.0, 1.0, 1.0, 1.0, eps];
    // The principal-curvature comparison carries chart differentiation
    // error; its gate is 1e-4 while the pinching margins stay at 1e-6.
    let tols = Tolerances { cert: 1e-4, ..Tolerances::for_charts() };
    let report = certify_prop_ell(&axes, 4, 0.0, 1000, &tols, &search(8, 1000, 3)).unwrap();

    let lambda_min_expected = axes[0] / (eps * eps); // 3^{-1/3}
    let lambda_max_expected = eps / (axes[0] * axes[0]); // 3^{1/6}
    assert!(
        (report.lambda_min - lambda_min_expected).abs() <= 1e-4,
        "lambda_min {} vs {}",
        report.lambda_min,
        lambda_min_expected
    );
    assert!(
        (report.lambda_max - lambda_max_expected).abs() <= 1e-4,
        "lambda_max {} vs {}",
        report.lambda_max,
        lambda_max_expected
    );
    assert!(report.hypothesis_met, "the principal-curvature condition must hold at the threshold");
    assert!(
        report.worst_star_margin >= -1e-6,
        "pinching margin {} at point {}",
        report.worst_star_margin,
        report.worst_point
    );
    assert!(report.pass);

    // Stretching the long axis to 1.5 breaks the hypothesis and the run
    // must say so rather than claim anything.
    let control =
        certify_prop_ell(&[1.0, 1.0, 1.0, 1.0, 1.5], 4, 0.0, 50, &tols, &search(8, 1000, 3))
            .unwrap();
    assert!(!control.hypothesis_met);
    assert!(!control.pass);
    assert!(control.note.contains("no pinching claim"));

    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "ellipsoid threshold took {elapsed:.1}s");
    println!("ACCEPTANCE 03 ellipsoid at the threshold axis ratio: PASS");
}

#[test]
fn acceptance_04_veronese_four_manifold() {
    let chart = gen_veronese(4).unwrap();
    let points = sample_points(&chart, 100);
    points.par_iter().enumerate().for_each(|(idx, u)| {
        let pd = pointwise_sff(&chart, u).unwrap();
        let (sff, amb) = (pd.sff, pd.amb);
        assert!((amb.c - 1.0).abs() <= 1e-12, "point {idx}: ambient must be the unit sphere");
        assert!(
            mean_curvature(&sff).norm <= 1e-6,
            "point {idx}: the embedding must be minimal (H = {:.3e})",
            mean_curvature(&sff).norm
        );
        let r = gauss_curvature(&sff, &amb);
        // Ten random planes per point; a hundred points makes the
        // thousand-plane budget.
        let mut rng = rng_from_seed(derive_seed(4, 0x0404, idx as u64));
        for _ in 0..10 {
            let f = haar_frame(&mut rng, 4, 2);
            let k = sectional(&r, &f.column(0).clone_owned(), &f.column(1).clone_owned()).unwrap();
            assert!((k - 0.4).abs() <= 1e-5, "point {idx}: sectional {k}");
        }
        let star =
            certify_star(&sff, &amb, &search(8, 2000, 4).for_point(idx as u64)).unwrap();
        assert!(
            (star.margin - 1.0 / 15.0).abs() <= 1e-5,
            "point {idx}: margin {} vs 1/15",
            star.margin
        );
    });
    println!("ACCEPTANCE 04 veronese n=4 constant curvature 0.4, margin 1/15: PASS");
}

#[test]
fn acceptance_05_equality_case_battery() {
    let t0 = Instant::now();
    let chart = gen_cp2().unwrap().composed();
    let points = sample_points(&chart, 100);
    let tols = Tolerances::for_charts();
    points.par_iter().enumerate().for_each(|(idx, u)| {
        let pd = pointwise_sff(&chart, u).unwrap();
        assert_eq!(pd.amb.c, 0.0, "point {idx}: composed chart lives in flat space");
        let scfg = search(12, 3000, 5).for_point(idx as u64);

        let star = certify_star(&pd.sff, &pd.amb, &scfg).unwrap();
        let ratio = star.k_min / (star.h * star.h);
        assert!((ratio - 1.0 / 3.0).abs() <= 1e-3, "point {idx}: K_min/H^2 = {ratio}");

        let nnic = certify_nnic(&pd.sff, &pd.amb, &tols, &scfg).unwrap();
        assert!(nnic.iso_min.abs() <= 1e-5, "point {idx}: iso_min {}", nnic.iso_min);
        let eq = nnic.equality.unwrap_or_else(|| {
            panic!("point {idx}: boundary point must enter the equality analysis")
        });
        assert!(eq.frame_residual <= 1e-5, "point {idx}: frame residual {}", eq.frame_residual);
        assert!(eq.sff_residual <= 1e-5, "point {idx}: structure residual {}", eq.sff_residual);
        assert!(
            eq.spectra_residual <= 1e-3,
            "point {idx}: spectra residual {}",
            eq.spectra_residual
        );
        assert!(eq.lemma_residual <= 1e-5, "point {idx}: lemma residual {}", eq.lemma_residual);
        assert!(
            eq.kaehler_residual <= 1e-5,
            "point {idx}: kaehler residual {}",
            eq.kaehler_residual
        );
        assert!(eq.pass);

        // Chart-frame spectra: the degenerate {0, 12k, 12k} side is the
        // self-dual one (the chart frames are complex-oriented), against
        // {8k, 8k, 8k}, relative to the spectrum scale 12k.
        let spectra =
            sd_asd_spectra(&bochner_matrix(&gauss_curvature(&pd.sff, &pd.amb)).unwrap()).unwrap();
        let k = star.k_min;
        let scale = 12.0 * k;
        let expected_sd = [0.0, 12.0 * k, 12.0 * k];
        let expected_asd = [8.0 * k, 8.0 * k, 8.0 * k];
        for (got, want) in spectra.mu_sd.iter().zip(expected_sd).chain(
            spectra.mu_asd.iter().zip(expected_asd),
        ) {
            assert!(
                (got - want).abs() <= 1e-3 * scale,
                "point {idx}: eigenvalue {got} vs {want} (k = {k})"
            );
        }
    });
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "equality battery took {elapsed:.1}s");
    println!("ACCEPTANCE 05 equality-case battery at 100 points: PASS");
}

#[test]
fn acceptance_06_partial_trace_chain() {
    (0..10_000u64).into_par_iter().for_each(|case| {
        let n = 4 + (case % 4) as usize;
        let m = 1 + ((case / 4) % 4) as usize;
        let mut rng = rng_from_seed(derive_seed(6, 0x0606, case));
        let sff =
            SecondFundamentalForm::from_fn(n, m, |_, _, _| rng.random_range(-0.9..0.9)).unwrap();
        let c: f64 = rng.random_range(-1.0..1.0);
        let amb = AmbientSpace::new(c);
        let p = 1 + rng.random_range(0..(n - 1));
        let frame = haar_frame(&mut rng, n, n);

        let r = gauss_curvature(&sff, &amb);
        let km = k_min(&r, &search(32, 200, derive_seed(6, 0x066b, case))).unwrap().value;
        let theta = theta_p(&sff, &amb, p, &frame).unwrap();

        let mc = mean_curvature(&sff);
        let rotated = rotate_sff(&sff, &frame, &DMatrix::identity(m, m)).unwrap();
        let mut partial = DVector::<f64>::zeros(m);
        for i in 0..p {
            partial += rotated.alpha(i, i);
        }
        let centered = &partial - &mc.vector * (n as f64 / 2.0);
        let rhs = 2.0 * (p * (n - p)) as f64 * (c - km) - centered.norm_squared()
            + 0.25 * (n * n) as f64 * mc.norm * mc.norm;
        let slack = rhs - theta;
        assert!(
            slack >= -1e-9,
            "case {case}: n={n} m={m} p={p} c={c:.3}: slack {slack:.3e}"
        );
    });
    println!("ACCEPTANCE 06 partial-trace chain on 10^4 random triples: PASS");
}

#[test]
fn acceptance_07_implication_suites() {
    // Pinching implies the partial-trace bounds for every admissible split.
    for &n in &[5usize, 6, 7] {
        let mut sampler = StarSffSampler::new(n, 2, 1.0, 70 + n as u64).unwrap();
        let samples: Vec<_> = (0..334).map(|_| sampler.next_sample().unwrap()).collect();
        assert!(
            sampler.acceptance_rate() >= 0.01,
            "n={n}: acceptance rate {:.4} too low",
            sampler.acceptance_rate()
        );
        samples.par_iter().enumerate().for_each(|(idx, s)| {
            let scfg = search(8, 1000, derive_seed(7, n as u64, idx as u64));
            for p in 2..=(n - 2) {
                let sup = sup_theta(&s.sff, &s.amb, p, &scfg).unwrap();
                let margin = (p * (n - p)) as f64 * s.amb.c - sup.value;
                assert!(
                    margin >= -1e-8,
                    "n={n} sample {idx} p={p}: margin {margin:.3e} (star margin {:.3e})",
                    s.margin
                );
            }
        });
    }

    // In dimension four, pinching implies nonnegative isotropic curvature.
    let mut sampler = StarSffSampler::new(4, 2, 1.0, 711).unwrap();
    let samples: Vec<_> = (0..1000).map(|_| sampler.next_sample().unwrap()).collect();
    assert!(sampler.acceptance_rate() >= 0.01);
    samples.par_iter().enumerate().for_each(|(idx, s)| {
        let r = gauss_curvature(&s.sff, &s.amb);
        let iso =
            min_isotropic(&r, &search(16, 2000, derive_seed(7, 4, idx as u64))).unwrap().value;
        assert!(
            iso >= -1e-8,
            "sample {idx}: iso {iso:.3e} under star margin {:.3e}",
            s.margin
        );
    });
    println!("ACCEPTANCE 07 implication suites (partial-trace bounds, isotropic): PASS");
}

#[test]
fn acceptance_08_sign_equivalence() {
    let discordant: usize = (0..1000u64)
        .into_par_iter()
        .map(|case| {
            let mut rng = rng_from_seed(derive_seed(8, 0x0808, case));
            let m = 1 + (case % 3) as usize;
            let sff = SecondFundamentalForm::from_fn(4, m, |_, _, _| {
                rng.random_range(-0.9..0.9)
            })
            .unwrap();
            let c: f64 = rng.random_range(-1.0..1.0);
            let r = gauss_curvature(&sff, &AmbientSpace::new(c));
            let iso =
                min_isotropic(&r, &search(12, 2000, derive_seed(8, 0x088b, case))).unwrap().value;
            let eig = sd_asd_spectra(&bochner_matrix(&r).unwrap()).unwrap().min_eig;
            let band = 1e-8;
            usize::from(iso.abs() > band && eig.abs() > band && iso.signum() != eig.signum())
        })
        .sum();
    assert_eq!(discordant, 0, "{discordant} discordant sign pairs");
    println!("ACCEPTANCE 08 sign equivalence of isotropic minimum and spectrum minimum: PASS");
}

#[test]
fn acceptance_09_report_determinism() {
    let exe = env!("CARGO_BIN_EXE_pinchlab");
    let run = |threads: &str| {
        let out = std::process::Command::new(exe)
            .args([
                "check",
                "--example",
                "cp2-s7",
                "--seed",
                "42",
                "--samples",
                "4",
                "--restarts",
                "8",
                "--oracle-samples",
                "1000",
            ])
            .env("PINCHLAB_THREADS", threads)
            .output()
            .expect("binary runs");
        let code = out.status.code().expect("exit code");
        assert!(code == 0 || code == 1, "unexpected exit code {code}");
        (code, String::from_utf8(out.stdout).expect("utf-8 report"))
    };
    // Different thread counts must not change the verdict or a single
    // certified byte.
    let (code_a, a) = run("2");
    let (code_b, b) = run("4");
    assert_eq!(code_a, code_b, "exit codes differ across thread counts");
    assert_eq!(
        strip_volatile(&a).unwrap(),
        strip_volatile(&b).unwrap(),
        "reports differ beyond the volatile fields"
    );
    println!("ACCEPTANCE 09 byte-deterministic reports across reruns and thread counts: PASS");
}

#[test]
fn acceptance_10_negative_control() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let chart = gen_product_spheres(r, r, true).unwrap();
    let points = sample_points(&chart, 25);
    points.par_iter().enumerate().for_each(|(idx, u)| {
        let pd = pointwise_sff(&chart, u).unwrap();
        assert!((pd.amb.c - 1.0).abs() <= 1e-9, "point {idx}: realized in the unit sphere");
        assert!(mean_curvature(&pd.sff).norm <= 1e-6, "point {idx}: minimal");
        let star =
            certify_star(&pd.sff, &pd.amb, &search(16, 3000, 10).for_point(idx as u64)).unwrap();
        assert!(star.k_min.abs() <= 1e-5, "point {idx}: K_min {}", star.k_min);
        assert!(
            (star.margin + 1.0 / 3.0).abs() <= 1e-4,
            "point {idx}: margin {} vs -1/3",
            star.margin
        );
        assert!(star.margin < -1e-6, "point {idx}: must be flagged as a violation");
    });
    println!("ACCEPTANCE 10 product-of-spheres control flagged at margin -1/3: PASS");
}
