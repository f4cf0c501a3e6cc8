//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with its measured numbers (run with `--nocapture` to see them on success).
//!
//! Library-level criteria live here; batch determinism and throughput are
//! exercised end-to-end in the CLI crate's acceptance suite.

use std::sync::LazyLock;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rir_synth::bands::{generate_multiband_rir, BandLayout, OCTAVE_EDGE_RATIO};
use rir_synth::dsp::{bandpass, convolve, convolve_direct, AudioBuffer};
use rir_synth::metrics::{
    estimate_edt, estimate_rt60, measure_drr, measure_itdg, schroeder_curve,
};
use rir_synth::response::{generate_rir_with_report, to_pressure, SparsifyReport};
use rir_synth::sampler::{sample, ParamRanges};
use rir_synth::seed::{stream, stream_rng};
use rir_synth::{
    generate_noise_vector, shape_energy_decay_curve, PressureImpulseResponse, RirParams,
};

const SR: u32 = 16_000;

fn report(name: &str, pass: bool, details: &str) {
    println!(
        "ACCEPTANCE {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Exactness of the decay-shaping closed forms and the dB-to-linear map,
/// checked with zero level deviation and sparsification disabled.
#[test]
fn criterion_equation_exactness() {
    let started = Instant::now();
    let params = RirParams::new(0.5, 0.1, 0.005, 0.0, 0.0, SR, 1).unwrap();
    let (l, k) = (params.rt60_samples(), params.edt_samples());

    let noise =
        generate_noise_vector(&params, &mut stream_rng(params.seed(), stream::NOISE)).unwrap();
    let curve = shape_energy_decay_curve(&noise, &params).unwrap();
    let levels = curve.levels_db();

    let checks = [
        (levels[k / 2], -5.0, "half EDT"),
        (levels[k], -10.0, "EDT mark"),
        (levels[l], -(10.0 + 50.0 * (l - k) as f64 / l as f64), "final sample"),
    ];
    let tolerance = 1e-9;
    let mut worst: f64 = 0.0;
    for (got, expected, _name) in checks {
        worst = worst.max((got - expected).abs());
    }

    let linear = rir_synth::edc_to_linear(&curve, &params);
    let map_zero = (linear.energies()[0] - 1.0).abs();
    let map_ten = (linear.energies()[k] - 0.1).abs();
    let elapsed = started.elapsed();

    let pass = worst <= tolerance && map_zero <= 1e-12 && map_ten <= 1e-12
        && elapsed.as_secs_f64() < 1.0;
    report(
        "eq-exactness",
        pass,
        &format!(
            "max closed-form error {worst:.2e} dB, 0 dB -> 1.0 err {map_zero:.2e}, \
             -10 dB -> 0.1 err {map_ten:.2e}, {elapsed:.2?}"
        ),
    );
    assert!(pass);
}

/// One hundred seeded draws from the default ranges, generated and measured.
struct RoundTrip {
    params: RirParams,
    report: SparsifyReport,
    rt60_rel_err: f64,
    measured_drr_db: f64,
    measured_itdg_s: f64,
}

static CORPUS: LazyLock<Vec<RoundTrip>> = LazyLock::new(|| {
    let ranges = ParamRanges::default();
    (0..100u64)
        .map(|index| {
            let params = sample(&ranges, index).expect("default ranges are satisfiable");
            let (rir, report) = generate_rir_with_report(&params).expect("generation succeeds");
            let pressure = to_pressure(&rir, &mut stream_rng(params.seed(), stream::POLARITY));
            let curve = schroeder_curve(&pressure).expect("not silent");
            let rt60 = estimate_rt60(&curve).expect("decays past -35 dB").seconds;
            RoundTrip {
                params,
                report,
                rt60_rel_err: ((rt60 - params.rt60()) / params.rt60()).abs(),
                measured_drr_db: measure_drr(&pressure, 0.0).expect("reverberant"),
                measured_itdg_s: measure_itdg(&pressure, -40.0).expect("has reflections"),
            }
        })
        .collect()
});

/// Requested-vs-measured RT60 over the default ranges, T30 estimator.
///
/// Known limitation: the decay-shaping equations spread the final 50 dB of
/// decay over the whole response length, so a slope-based estimator reads the
/// tail at about 1.2x the requested RT60 and the median error settles near
/// 18%, above this criterion's 15% budget. The equations and the estimator
/// are both pinned by the criteria above and below, so the miss is inherent;
/// this test states the target honestly and fails until the tolerance or the
/// equations change.
#[test]
fn criterion_rt60_round_trip() {
    let started = Instant::now();
    let ranges = ParamRanges::default();
    let mut errors: Vec<f64> = (0..100u64)
        .map(|index| {
            let params = sample(&ranges, index).unwrap();
            let (rir, _) = generate_rir_with_report(&params).unwrap();
            let pressure = to_pressure(&rir, &mut stream_rng(params.seed(), stream::POLARITY));
            let curve = schroeder_curve(&pressure).unwrap();
            let rt60 = estimate_rt60(&curve).unwrap().seconds;
            ((rt60 - params.rt60()) / params.rt60()).abs()
        })
        .collect();
    let elapsed = started.elapsed();
    errors.sort_by(f64::total_cmp);
    let median = (errors[49] + errors[50]) / 2.0;

    let pass = median <= 0.15 && elapsed.as_secs_f64() < 30.0;
    report(
        "rt60-round-trip",
        pass,
        &format!(
            "median relative error {:.1}% (tolerance 15%), single-threaded {elapsed:.2?} \
             (bound 30 s)",
            median * 100.0
        ),
    );
    assert!(
        pass,
        "median RT60 error {:.3} exceeds 0.15: structural bias of the decay equations, \
         see the acceptance notes in the README",
        median
    );
}

/// Every measured DRR must land in [target, target + the final deletion's
/// DRR step] — sparsification stops at the first crossing, so the overshoot
/// can never exceed one ray.
#[test]
fn criterion_drr_guarantee() {
    let violations: Vec<String> = CORPUS
        .iter()
        .filter(|run| {
            let target = run.params.drr_db();
            let upper = target + run.report.overshoot_bound_db;
            !(run.measured_drr_db >= target - 1e-9 && run.measured_drr_db <= upper + 1e-9)
        })
        .map(|run| {
            format!(
                "seed {}: measured {:.3} dB, target {:.3} dB, bound +{:.3} dB",
                run.params.seed(),
                run.measured_drr_db,
                run.params.drr_db(),
                run.report.overshoot_bound_db
            )
        })
        .collect();

    let max_overshoot = CORPUS
        .iter()
        .map(|run| run.measured_drr_db - run.params.drr_db())
        .fold(f64::MIN, f64::max);
    let pass = violations.is_empty();
    report(
        "drr-guarantee",
        pass,
        &format!(
            "{}/100 within [target, target + one-ray step], worst overshoot {max_overshoot:.3} dB",
            100 - violations.len()
        ),
    );
    assert!(pass, "violations: {violations:?}");
}

/// Measured ITDG is never shorter than requested: the gap is zeroed and
/// deletion can only push the first reflection later.
#[test]
fn criterion_itdg_guarantee() {
    let ok = CORPUS
        .iter()
        .filter(|run| run.measured_itdg_s >= run.params.itdg())
        .count();
    let pass = ok == CORPUS.len();
    report("itdg-guarantee", pass, &format!("{ok}/100 at or above request"));
    assert!(pass);
}

/// FFT convolution against the naive direct oracle on random pairs.
#[test]
fn criterion_convolution_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_4401);
    let mut worst: f64 = 0.0;
    for pair in 0..50 {
        // two full-size pairs (1 s signal, 0.3 s response), the rest smaller
        let (n, m) = if pair < 2 {
            (16_000, 4_800)
        } else {
            (rng.random_range(200..6_000), rng.random_range(10..1_200))
        };
        let signal: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let kernel: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fft = convolve(
            &AudioBuffer::new(signal.clone(), SR).unwrap(),
            &AudioBuffer::new(kernel.clone(), SR).unwrap(),
        )
        .unwrap();
        let direct = convolve_direct(&signal, &kernel);
        let err: f64 = fft
            .samples()
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let norm: f64 = direct.iter().map(|x| x * x).sum();
        worst = worst.max((err / norm).sqrt());
    }
    let pass = worst <= 1e-6;
    report(
        "convolution-oracle",
        pass,
        &format!("50 pairs, worst relative RMS {worst:.2e} (tolerance 1e-6)"),
    );
    assert!(pass);
}

/// The estimators must recover ideal exponential decays to within 1%.
#[test]
fn criterion_metrics_selftest() {
    let mut worst: f64 = 0.0;
    for t60 in [0.2, 0.5, 0.7] {
        let n = (2.2 * t60 * f64::from(SR)) as usize;
        let samples: Vec<f64> = (0..n)
            .map(|i| 10.0_f64.powf(-3.0 * i as f64 / (t60 * f64::from(SR))))
            .collect();
        let rir = PressureImpulseResponse::new(samples, SR).unwrap();
        let curve = schroeder_curve(&rir).unwrap();
        let rt60 = estimate_rt60(&curve).unwrap().seconds;
        let edt = estimate_edt(&curve).unwrap();
        worst = worst.max(((rt60 - t60) / t60).abs());
        worst = worst.max(((edt - t60) / t60).abs());
    }
    let pass = worst <= 0.01;
    report(
        "metrics-selftest",
        pass,
        &format!("T in {{0.2, 0.5, 0.7}} s, worst RT60/EDT error {:.3}%", worst * 100.0),
    );
    assert!(pass);
}

/// Two-band generation: band-limited RT60 within 20% of each request.
#[test]
fn criterion_multiband() {
    let layout = BandLayout::from_centers(vec![500.0, 2000.0], OCTAVE_EDGE_RATIO).unwrap();
    let seed = 23; // fixed instance; per-band errors stay well inside 20%
    let requests = [0.6, 0.3];
    let band_params: Vec<RirParams> = requests
        .iter()
        .map(|&rt60| RirParams::new(rt60, 0.1, 0.005, -7.0, 6.0, SR, seed).unwrap())
        .collect();
    let sum = generate_multiband_rir(&band_params, &layout).unwrap();

    let mut details = Vec::new();
    let mut pass = true;
    for (band, &requested) in requests.iter().enumerate() {
        let (low, high) = layout.edges(band, SR);
        let buf = AudioBuffer::new(sum.amplitudes().to_vec(), SR).unwrap();
        let filtered = bandpass(&buf, low, high).unwrap();
        let rir = PressureImpulseResponse::new(filtered.samples().to_vec(), SR).unwrap();
        let measured = estimate_rt60(&schroeder_curve(&rir).unwrap()).unwrap().seconds;
        let rel = (measured - requested) / requested;
        pass &= rel.abs() <= 0.20;
        details.push(format!(
            "{:.0} Hz: {measured:.3} s for {requested} s ({:+.1}%)",
            layout.centers_hz()[band],
            rel * 100.0
        ));
    }
    report("multiband", pass, &details.join(", "));
    assert!(pass);
}
