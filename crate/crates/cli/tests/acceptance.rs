//! Acceptance suite: one test per criterion, one printed PASS/FAIL line per
//! criterion. Expensive long-horizon variants are marked `#[ignore]` and run
//! with `cargo test -p morphdet-cli --test acceptance -- --ignored`.

use std::process::Command;

use morphdet_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(name: &str, pass: bool, details: &str) {
    println!(
        "ACCEPTANCE {}: {name} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {details}");
}

fn scenario(
    noise: NoiseParams,
    detectors: Vec<DetectorKind>,
    min_errors: u64,
    max_symbols: u64,
    master_seed: u64,
) -> Scenario {
    Scenario {
        noise,
        quant: QuantConfig::new(10.0, 300).unwrap(),
        se: StructuringElement::line(15).unwrap(),
        amplitude: 1.0,
        symbol_len: 70,
        filter: design_receiver_filter(70, 0.1).unwrap(),
        detectors,
        master_seed,
        min_errors,
        max_symbols,
    }
}

// ---------------------------------------------------------------------------
// 1. Analytic Gaussian anchor
// ---------------------------------------------------------------------------

/// Normal tail probability Q(sqrt(70)/2.71), evaluated independently at
/// 40-digit precision.
const GAUSSIAN_TAIL: f64 = 1.009_896_547_239_648_4e-3;

#[test]
fn analytic_gaussian_anchor() {
    let s = scenario(
        NoiseParams::gaussian(2.71).unwrap(),
        vec![DetectorKind::MapMixture],
        200,
        5_000_000,
        0xA1,
    );
    let p = &run_ber_point(&s).unwrap()[0];
    let pass = !p.capped && p.ci_low <= GAUSSIAN_TAIL && GAUSSIAN_TAIL <= p.ci_high;
    check(
        "analytic Gaussian anchor",
        pass,
        &format!(
            "map_mixture ber={:.4e} ci=[{:.4e},{:.4e}] target={GAUSSIAN_TAIL:.4e} ({} errors / {} symbols)",
            p.ber, p.ci_low, p.ci_high, p.errors, p.symbols
        ),
    );
}

// ---------------------------------------------------------------------------
// 2 & 3. Morphology against the naive reference, and the algebraic laws
// ---------------------------------------------------------------------------

mod naive {
    use morphdet_core::BinaryImage;

    fn probe(img: &BinaryImage, col: isize, row: usize, outside: bool) -> bool {
        if col < 0 || col >= img.width() as isize {
            outside
        } else {
            img.get(col as usize, row)
        }
    }

    pub fn erode(img: &BinaryImage, se_len: usize) -> BinaryImage {
        let r = (se_len / 2) as isize;
        let mut out = BinaryImage::zeros(img.width(), img.height()).unwrap();
        for row in 0..img.height() {
            for col in 0..img.width() {
                let v = (-r..=r).all(|d| probe(img, col as isize + d, row, true));
                out.set(col, row, v);
            }
        }
        out
    }

    pub fn dilate(img: &BinaryImage, se_len: usize) -> BinaryImage {
        let r = (se_len / 2) as isize;
        let mut out = BinaryImage::zeros(img.width(), img.height()).unwrap();
        for row in 0..img.height() {
            for col in 0..img.width() {
                let v = (-r..=r).any(|d| probe(img, col as isize + d, row, false));
                out.set(col, row, v);
            }
        }
        out
    }

    pub fn open(img: &BinaryImage, se_len: usize) -> BinaryImage {
        dilate(&erode(img, se_len), se_len)
    }

    pub fn close(img: &BinaryImage, se_len: usize) -> BinaryImage {
        erode(&dilate(img, se_len), se_len)
    }

    pub fn open_close(img: &BinaryImage, se_len: usize) -> BinaryImage {
        close(&open(img, se_len), se_len)
    }
}

fn random_image(rng: &mut ChaCha8Rng, max_dim: usize) -> BinaryImage {
    let w = rng.random_range(1..=max_dim);
    let h = rng.random_range(1..=max_dim);
    let density: f64 = rng.random_range(0.05..0.95);
    let mut img = BinaryImage::zeros(w, h).unwrap();
    for row in 0..h {
        for col in 0..w {
            if rng.random::<f64>() < density {
                img.set(col, row, true);
            }
        }
    }
    img
}

#[test]
fn morphology_matches_naive_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    let se_lens = [1usize, 3, 5, 15];
    let mut pairs = 0u32;
    for _ in 0..250 {
        let img = random_image(&mut rng, 40);
        for &len in &se_lens {
            let se = StructuringElement::line(len).unwrap();
            assert_eq!(erode(&img, &se), naive::erode(&img, len), "erode se={len}");
            assert_eq!(
                dilate(&img, &se),
                naive::dilate(&img, len),
                "dilate se={len}"
            );
            assert_eq!(open(&img, &se), naive::open(&img, len), "open se={len}");
            assert_eq!(close(&img, &se), naive::close(&img, len), "close se={len}");
            assert_eq!(
                open_close(&img, &se),
                naive::open_close(&img, len),
                "open_close se={len}"
            );
            pairs += 1;
        }
    }
    check(
        "morphology oracle equivalence",
        pairs >= 1000,
        &format!("{pairs} image/SE pairs, five operators each, exact"),
    );
}

#[test]
fn morphology_algebraic_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    let mut instances = 0u32;
    for _ in 0..200 {
        let img = random_image(&mut rng, 30);
        let len = [3usize, 5, 15][rng.random_range(0..3)];
        let se = StructuringElement::line(len).unwrap();

        let eroded = erode(&img, &se);
        let dilated = dilate(&img, &se);
        let opened = open(&img, &se);
        let closed = close(&img, &se);
        let oc = open_close(&img, &se);

        // Anti-extensivity / extensivity.
        assert!(opened.is_subset_of(&img), "open not anti-extensive");
        assert!(img.is_subset_of(&closed), "close not extensive");
        assert!(
            eroded.is_subset_of(&img) && img.is_subset_of(&dilated),
            "ordering"
        );

        // Idempotence.
        assert_eq!(open(&opened, &se), opened, "open idempotence");
        assert_eq!(close(&closed, &se), closed, "close idempotence");
        assert_eq!(open_close(&oc, &se), oc, "open_close idempotence");

        // Complement duality.
        assert_eq!(
            dilated,
            erode(&img.complement(), &se).complement(),
            "duality"
        );

        // Monotonicity against a superset image.
        let mut bigger = img.clone();
        for _ in 0..10 {
            bigger.set(
                rng.random_range(0..img.width()),
                rng.random_range(0..img.height()),
                true,
            );
        }
        assert!(
            erode(&img, &se).is_subset_of(&erode(&bigger, &se)),
            "erode monotone"
        );
        assert!(
            dilate(&img, &se).is_subset_of(&dilate(&bigger, &se)),
            "dilate monotone"
        );
        assert!(
            open(&img, &se).is_subset_of(&open(&bigger, &se)),
            "open monotone"
        );
        assert!(
            close(&img, &se).is_subset_of(&close(&bigger, &se)),
            "close monotone"
        );
        assert!(
            oc.is_subset_of(&open_close(&bigger, &se)),
            "open_close monotone"
        );

        instances += 1;
    }
    check(
        "morphology algebraic laws",
        instances >= 200,
        &format!("{instances} random instances, all laws exact"),
    );
}

// ---------------------------------------------------------------------------
// 4. Bridge round trips
// ---------------------------------------------------------------------------

#[test]
fn bridge_round_trips_exact() {
    let cfg = QuantConfig::new(10.0, 300).unwrap();
    let v = cfg.offset();

    for value in -v..=v {
        let q = QuantizedSignal::from_values(vec![value], &cfg).unwrap();
        assert_eq!(
            image_to_signal(&signal_to_image(&q, &cfg), &cfg, false),
            q.values(),
            "plain route at {value}"
        );
        assert_eq!(
            image_to_signal(&signal_to_image_mirrored(&q, &cfg), &cfg, true),
            q.values(),
            "mirrored route at {value}"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    for _ in 0..1000 {
        let raw: Vec<f64> = (0..70).map(|_| rng.random_range(-20.0..20.0)).collect();
        let q = quantize(&raw, &cfg);
        assert_eq!(
            image_to_signal(&signal_to_image(&q, &cfg), &cfg, false),
            q.values()
        );
        assert_eq!(
            image_to_signal(&signal_to_image_mirrored(&q, &cfg), &cfg, true),
            q.values()
        );
    }
    check(
        "bridge round trips",
        true,
        "exhaustive per-column values and 1000 random length-70 signals, exact",
    );
}

// ---------------------------------------------------------------------------
// 5. Spike excision
// ---------------------------------------------------------------------------

#[test]
fn narrow_spike_excised() {
    let cfg = QuantConfig::new(10.0, 300).unwrap();
    let se = StructuringElement::line(15).unwrap();
    let mut r = vec![-1.0; 70];
    for sample in &mut r[30..35] {
        *sample += 8.0;
    }
    let (decision, trace) = detect_morph_traced(&r, &cfg, &se);
    let interior_ok = trace.averaged[15..55].iter().all(|&v| v == -10.0);
    check(
        "narrow spike excision",
        decision == Decision::Minus && interior_ok,
        &format!(
            "decision {} with interior averaged signal pinned at -10",
            decision.sign()
        ),
    );
}

// ---------------------------------------------------------------------------
// 6. Impulsive floor equals the Gaussian-only floor
// ---------------------------------------------------------------------------

fn floor_comparison(sigma1: f64, band: (f64, f64), min_errors: u64, seed: u64) -> (f64, f64, bool) {
    let sigma2 = 10.0 * sigma1;
    let gaussian = scenario(
        NoiseParams::gaussian(sigma1).unwrap(),
        vec![DetectorKind::Morph],
        min_errors,
        20_000_000,
        seed,
    );
    let g = run_ber_point(&gaussian).unwrap()[0].clone();
    let impulsive = scenario(
        NoiseParams::new(0.001, sigma1, sigma2).unwrap(),
        vec![DetectorKind::Morph],
        min_errors,
        20_000_000,
        seed + 1,
    );
    let i = run_ber_point(&impulsive).unwrap()[0].clone();
    let ratio = i.ber / g.ber;
    let pass = (1.0 / 3.0..=3.0).contains(&ratio)
        && (band.0..=band.1).contains(&g.ber)
        && (band.0..=band.1).contains(&i.ber)
        && !g.capped
        && !i.capped;
    println!(
        "  gaussian-only ber={:.4e} ({} errs), impulsive ber={:.4e} ({} errs), ratio {:.2}",
        g.ber, g.errors, i.ber, i.errors, ratio
    );
    (g.ber, i.ber, pass)
}

#[test]
fn impulsive_floor_matches_gaussian_floor() {
    // Fast variant: background std 2.5 puts the floor near 1e-3.
    let (g, i, pass) = floor_comparison(2.5, (1e-4, 1e-2), 100, 0xA6);
    check(
        "impulsive floor vs Gaussian floor (fast)",
        pass,
        &format!("gaussian {g:.3e}, impulsive {i:.3e}, both near 1e-3 and within 3x"),
    );
}

#[test]
#[ignore = "long-running floor reproduction at the 1e-4 level (minutes)"]
fn impulsive_floor_matches_gaussian_floor_extended() {
    let (g, i, pass) = floor_comparison(2.0, (1e-5, 1e-3), 200, 0xA7);
    check(
        "impulsive floor vs Gaussian floor (extended)",
        pass,
        &format!("gaussian {g:.3e}, impulsive {i:.3e}, both near 1e-4 and within 3x"),
    );
}

// ---------------------------------------------------------------------------
// 7. Genie performance is invariant to the impulse level
// ---------------------------------------------------------------------------

#[test]
fn genie_invariant_to_impulse_level() {
    let s = scenario(
        NoiseParams::new(0.01, 2.0, 10.0).unwrap(),
        vec![DetectorKind::MapGenie],
        50,
        20_000_000,
        0xA8,
    );
    let points = sweep(&s, &[10.0, 20.0, 40.0, 60.0]).unwrap();
    let widest_low = points.iter().map(|p| p.ci_low).fold(f64::MIN, f64::max);
    let narrowest_high = points.iter().map(|p| p.ci_high).fold(f64::MAX, f64::min);
    let pass = widest_low <= narrowest_high && points.iter().all(|p| !p.capped);
    let summary: Vec<String> = points
        .iter()
        .map(|p| format!("s2={} ber={:.3e}", p.sigma2, p.ber))
        .collect();
    check(
        "genie invariance to impulse level",
        pass,
        &format!(
            "{} (all 95% intervals mutually overlap)",
            summary.join(", ")
        ),
    );
}

// ---------------------------------------------------------------------------
// 8. Detector ordering under strong impulses
// ---------------------------------------------------------------------------

#[test]
fn morph_beats_matched_filter_tenfold() {
    let s = scenario(
        NoiseParams::new(0.01, 1.0, 40.0).unwrap(),
        vec![DetectorKind::Morph, DetectorKind::Matched],
        100,
        200_000,
        0xA9,
    );
    let points = run_ber_point(&s).unwrap();
    let morph = &points[0];
    let matched = &points[1];
    let pass = matched.errors >= 100 && 10.0 * morph.ber <= matched.ber;
    check(
        "morphological detector 10x below matched filter",
        pass,
        &format!(
            "morph ber={:.4e} ({} errs), matched ber={:.4e} ({} errs), ratio {:.1} (paired seeds, {} symbols)",
            morph.ber,
            morph.errors,
            matched.ber,
            matched.errors,
            matched.ber / morph.ber.max(f64::MIN_POSITIVE),
            morph.symbols
        ),
    );
}

// ---------------------------------------------------------------------------
// 9. Noise generator statistics
// ---------------------------------------------------------------------------

#[test]
fn noise_generator_statistics() {
    let params = NoiseParams::new(0.01, 2.0, 20.0).unwrap();
    let n = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0xAA);
    let noise = params.sample_labeled(n, &mut rng);

    let var = noise.samples().iter().map(|s| s * s).sum::<f64>() / n as f64;
    let expected_var = 0.99 * 4.0 + 0.01 * 400.0;
    let var_ok = (var - expected_var).abs() < 0.02 * expected_var;

    let impulse_fraction = noise
        .labels()
        .iter()
        .filter(|&&l| l == LabeledNoise::IMPULSE)
        .count() as f64
        / n as f64;
    let four_sigma = 4.0 * (0.01_f64 * 0.99 / n as f64).sqrt();
    let frac_ok = (impulse_fraction - 0.01).abs() < four_sigma;

    check(
        "noise generator statistics",
        var_ok && frac_ok,
        &format!(
            "variance {var:.4} vs {expected_var} (2% tol), impulse fraction {impulse_fraction:.5} vs 0.01 (+-{four_sigma:.5})"
        ),
    );
}

// ---------------------------------------------------------------------------
// 10. Byte-identical reruns through the CLI
// ---------------------------------------------------------------------------

#[test]
fn sweep_csv_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let scenario_path = dir.path().join("s.txt");
    std::fs::write(
        &scenario_path,
        "\
epsilon = 0.01
sigma1 = 1
sigma2_grid = 8, 16
amplitude = 1
M = 70
N = 300
K = 10
se_length = 15
detectors = morph, map_mixture, map_genie, matched
min_errors = 20
max_symbols = 20000
seed = 1234
",
    )
    .unwrap();

    let run = |out: &std::path::Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_morphdet"))
            .args(["sweep", "--scenario"])
            .arg(&scenario_path)
            .arg("--output")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let first = run(&dir.path().join("a.csv"));
    let second = run(&dir.path().join("b.csv"));
    check(
        "deterministic sweep output",
        first == second,
        &format!("two invocations, {} bytes, byte-identical", first.len()),
    );
}
