//! Acoustic parameter estimators.
//!
//! These close the loop on generation: given a pressure-domain impulse
//! response they measure RT60, EDT, DRR and ITDG with no shared state or
//! randomness, so they can serve as an independent check on any generator.
//!
//! Everything here squares pressure samples internally. Feeding already
//! energetic values through these estimators would double every dB slope
//! (a 60 dB energy decay would read as 120 dB), so energetic responses must
//! go through [`crate::to_pressure`] first — the type signatures enforce it.

use crate::error::MetricError;
use crate::response::PressureImpulseResponse;

/// Default detection threshold for the first reflection, relative to the
/// direct peak.
pub const DEFAULT_ITDG_THRESHOLD_DB: f64 = -40.0;

/// Default direct-sound window for DRR measurement. Zero reduces to the
/// single-sample direct ray used during generation.
pub const DEFAULT_DRR_WINDOW_S: f64 = 0.0;

/// Backward-integrated energy decay, normalized to 0 dB at the start.
///
/// Levels are non-increasing; slots after the last non-zero sample carry
/// `-inf` as the silence sentinel.
#[derive(Debug, Clone)]
pub struct SchroederCurve {
    levels_db: Vec<f64>,
    sample_rate: u32,
}

impl SchroederCurve {
    pub fn levels_db(&self) -> &[f64] {
        &self.levels_db
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.levels_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels_db.is_empty()
    }
}

/// A decay time plus the quality of the line fit that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEstimate {
    pub seconds: f64,
    /// Correlation coefficient of the regression; in `[-1, 0]`, closer to −1
    /// means the decay is closer to a single straight slope.
    pub fit_quality: f64,
}

/// Aggregate measurement with per-field outcomes.
#[derive(Debug, Clone)]
pub struct MeasuredParams {
    pub rt60: Result<DecayEstimate, MetricError>,
    pub edt: Result<f64, MetricError>,
    pub drr_db: Result<f64, MetricError>,
    pub itdg: Result<f64, MetricError>,
}

impl MeasuredParams {
    /// Fit quality of the RT60 regression, when that estimate succeeded.
    pub fn fit_quality(&self) -> Option<f64> {
        self.rt60.as_ref().ok().map(|e| e.fit_quality)
    }
}

/// Computes the energy decay curve `10*log10(sum_{m>=n} h[m]^2 / total)` in a
/// single backward pass.
pub fn schroeder_curve(rir: &PressureImpulseResponse) -> Result<SchroederCurve, MetricError> {
    let h = rir.amplitudes();
    let mut remaining = Vec::with_capacity(h.len());
    let mut acc = 0.0f64;
    for &x in h.iter().rev() {
        acc += x * x;
        remaining.push(acc);
    }
    let total = acc;
    if total <= 0.0 {
        return Err(MetricError::SilentInput);
    }
    let levels_db = remaining
        .iter()
        .rev()
        .map(|&s| 10.0 * (s / total).log10())
        .collect();
    Ok(SchroederCurve {
        levels_db,
        sample_rate: rir.sample_rate(),
    })
}

/// Least-squares slope of the curve between its first crossings of `top_db`
/// and `bottom_db`. Returns (dB per second, correlation).
fn fit_slope(
    curve: &SchroederCurve,
    top_db: f64,
    bottom_db: f64,
) -> Result<(f64, f64), MetricError> {
    let levels = &curve.levels_db;
    let insufficient = || {
        let reached = levels
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min);
        MetricError::InsufficientDecay {
            reached_db: reached,
            required_db: bottom_db,
        }
    };
    let start = levels
        .iter()
        .position(|&v| v <= top_db)
        .ok_or_else(insufficient)?;
    let end = levels[start..]
        .iter()
        .position(|&v| v <= bottom_db)
        .map(|off| start + off)
        .ok_or_else(insufficient)?;

    let dt = 1.0 / f64::from(curve.sample_rate);
    let points: Vec<(f64, f64)> = (start..=end)
        .filter(|&n| levels[n].is_finite())
        .map(|n| (n as f64 * dt, levels[n]))
        .collect();
    if points.len() < 2 {
        return Err(insufficient());
    }

    let n = points.len() as f64;
    let mean_t = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_v = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_t = 0.0;
    let mut var_v = 0.0;
    for &(t, v) in &points {
        cov += (t - mean_t) * (v - mean_v);
        var_t += (t - mean_t) * (t - mean_t);
        var_v += (v - mean_v) * (v - mean_v);
    }
    if var_t == 0.0 || var_v == 0.0 {
        return Err(insufficient());
    }
    let slope = cov / var_t;
    if slope >= 0.0 {
        return Err(insufficient());
    }
    let correlation = cov / (var_t.sqrt() * var_v.sqrt());
    Ok((slope, correlation))
}

/// RT60 via the T30 convention: fit the −5..−35 dB span and extrapolate, so
/// the result is twice the fitted 30 dB traversal time.
pub fn estimate_rt60(curve: &SchroederCurve) -> Result<DecayEstimate, MetricError> {
    let (slope, fit_quality) = fit_slope(curve, -5.0, -35.0)?;
    Ok(DecayEstimate {
        seconds: 60.0 / -slope,
        fit_quality,
    })
}

/// T20 fallback for responses whose curve never reaches −35 dB: fits
/// −5..−25 dB and extrapolates (three times the 20 dB traversal time).
pub fn estimate_rt60_t20(curve: &SchroederCurve) -> Result<DecayEstimate, MetricError> {
    let (slope, fit_quality) = fit_slope(curve, -5.0, -25.0)?;
    Ok(DecayEstimate {
        seconds: 60.0 / -slope,
        fit_quality,
    })
}

/// Early decay time: fit from 0 to −10 dB, times six to a 60 dB equivalent.
pub fn estimate_edt(curve: &SchroederCurve) -> Result<f64, MetricError> {
    let (slope, _) = fit_slope(curve, 0.0, -10.0)?;
    Ok(60.0 / -slope)
}

/// Direct-to-reverberant ratio in dB.
///
/// The direct arrival is the global energy peak; direct energy is summed over
/// `[peak, peak + window]` and reverberant energy over everything after.
pub fn measure_drr(
    rir: &PressureImpulseResponse,
    direct_window_s: f64,
) -> Result<f64, MetricError> {
    if !direct_window_s.is_finite() || direct_window_s < 0.0 {
        return Err(MetricError::InvalidWindow(direct_window_s));
    }
    let h = rir.amplitudes();
    let peak = peak_index(h).ok_or(MetricError::SilentInput)?;
    let window = (direct_window_s * f64::from(rir.sample_rate())).round() as usize;
    let split = (peak + window + 1).min(h.len());
    let direct: f64 = h[peak..split].iter().map(|x| x * x).sum();
    let reverberant: f64 = h[split..].iter().map(|x| x * x).sum();
    if reverberant <= 0.0 {
        return Err(MetricError::NoReverberantEnergy);
    }
    Ok(10.0 * (direct / reverberant).log10())
}

/// Time from the direct peak to the first later sample whose energy exceeds
/// the peak energy offset by `threshold_db` (a negative value).
pub fn measure_itdg(
    rir: &PressureImpulseResponse,
    threshold_db: f64,
) -> Result<f64, MetricError> {
    if !threshold_db.is_finite() || threshold_db >= 0.0 {
        return Err(MetricError::InvalidThreshold(threshold_db));
    }
    let h = rir.amplitudes();
    let peak = peak_index(h).ok_or(MetricError::SilentInput)?;
    let threshold = h[peak] * h[peak] * 10.0_f64.powf(threshold_db / 10.0);
    for (offset, x) in h[peak + 1..].iter().enumerate() {
        if x * x > threshold {
            return Ok((offset + 1) as f64 / f64::from(rir.sample_rate()));
        }
    }
    Err(MetricError::NoReflectionFound)
}

/// Runs all four estimators with default settings.
///
/// A completely silent response fails as a whole; otherwise each field
/// carries its own outcome. RT60 falls back to T20 when the curve never
/// decays far enough for T30.
pub fn measure_all(rir: &PressureImpulseResponse) -> Result<MeasuredParams, MetricError> {
    let curve = schroeder_curve(rir)?;
    let rt60 = estimate_rt60(&curve).or_else(|err| match err {
        MetricError::InsufficientDecay { .. } => estimate_rt60_t20(&curve),
        other => Err(other),
    });
    Ok(MeasuredParams {
        rt60,
        edt: estimate_edt(&curve),
        drr_db: measure_drr(rir, DEFAULT_DRR_WINDOW_S),
        itdg: measure_itdg(rir, DEFAULT_ITDG_THRESHOLD_DB),
    })
}

/// Index of the first sample with maximal energy, `None` on silence.
fn peak_index(h: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in h.iter().enumerate() {
        let e = x * x;
        if e > 0.0 && best.map_or(true, |(_, b)| e > b) {
            best = Some((i, e));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SR: u32 = 16_000;

    fn pressure(samples: Vec<f64>) -> PressureImpulseResponse {
        PressureImpulseResponse::new(samples, SR).unwrap()
    }

    /// Amplitude envelope decaying 60 dB of energy per `t60` seconds.
    fn exponential(t60: f64, duration: f64) -> PressureImpulseResponse {
        let n = (duration * f64::from(SR)) as usize;
        let samples = (0..n)
            .map(|i| 10.0_f64.powf(-3.0 * i as f64 / (t60 * f64::from(SR))))
            .collect();
        pressure(samples)
    }

    #[test]
    fn unit_impulse_curve() {
        let curve = schroeder_curve(&pressure(vec![1.0, 0.0, 0.0])).unwrap();
        assert_eq!(curve.levels_db()[0], 0.0);
        assert_eq!(curve.levels_db()[1], f64::NEG_INFINITY);
        assert_eq!(curve.levels_db()[2], f64::NEG_INFINITY);
    }

    #[test]
    fn exponential_curve_is_linear_in_time() {
        let t60 = 0.5;
        let curve = schroeder_curve(&exponential(t60, 0.8)).unwrap();
        // slope -60 dB per t60; check away from the truncated tail
        for n in [100usize, 1000, 4000] {
            let expected = -60.0 * n as f64 / (t60 * f64::from(SR));
            let got = curve.levels_db()[n];
            assert!(
                (got - expected).abs() < 0.05,
                "n={n}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn curve_is_non_increasing() {
        let p = pressure(vec![0.3, -0.8, 0.1, 0.0, 0.5, -0.2, 0.05]);
        let curve = schroeder_curve(&p).unwrap();
        for pair in curve.levels_db().windows(2) {
            assert!(pair[1] <= pair[0]);
        }
        assert_eq!(curve.levels_db()[0], 0.0);
    }

    #[test]
    fn silence_is_rejected() {
        let err = schroeder_curve(&pressure(vec![0.0; 64])).unwrap_err();
        assert_eq!(err, MetricError::SilentInput);
    }

    #[test]
    fn rt60_recovers_ideal_exponentials() {
        for t60 in [0.2, 0.5, 0.7] {
            let est = estimate_rt60(&schroeder_curve(&exponential(t60, 2.2 * t60)).unwrap())
                .unwrap();
            assert!(
                (est.seconds - t60).abs() / t60 < 0.01,
                "t60={t60}: got {}",
                est.seconds
            );
            assert!(est.fit_quality <= -0.999);
        }
    }

    #[test]
    fn edt_matches_rt60_for_single_slope() {
        let t60 = 0.6;
        let curve = schroeder_curve(&exponential(t60, 1.4)).unwrap();
        let edt = estimate_edt(&curve).unwrap();
        let rt60 = estimate_rt60(&curve).unwrap().seconds;
        assert!((edt - t60).abs() / t60 < 0.01);
        assert!((edt - rt60).abs() / rt60 < 0.02);
    }

    /// Two-segment response: fast early decay then a slow tail.
    fn two_slope() -> PressureImpulseResponse {
        let early = 0.1;
        let late = 0.8;
        let split = 1600usize;
        let n = 16_000usize;
        let mut samples = Vec::with_capacity(n);
        for i in 0..split {
            samples.push(10.0_f64.powf(-3.0 * i as f64 / (early * f64::from(SR))));
        }
        let joint = *samples.last().unwrap();
        for i in 0..n - split {
            samples.push(joint * 10.0_f64.powf(-3.0 * i as f64 / (late * f64::from(SR))));
        }
        pressure(samples)
    }

    #[test]
    fn steeper_early_slope_pulls_edt_below_rt60() {
        let curve = schroeder_curve(&two_slope()).unwrap();
        let edt = estimate_edt(&curve).unwrap();
        let rt60 = estimate_rt60(&curve).unwrap().seconds;
        assert!(edt < rt60, "edt={edt}, rt60={rt60}");
    }

    #[test]
    fn fit_quality_degrades_on_bent_curves() {
        let single = estimate_rt60(&schroeder_curve(&exponential(0.5, 1.2)).unwrap()).unwrap();
        let double = estimate_rt60(&schroeder_curve(&two_slope()).unwrap()).unwrap();
        assert!(single.fit_quality < double.fit_quality);
        assert!(double.fit_quality < 0.0);
    }

    #[test]
    fn shallow_decay_is_insufficient() {
        let curve = schroeder_curve(&pressure(vec![1.0, 0.9])).unwrap();
        assert!(matches!(
            estimate_edt(&curve),
            Err(MetricError::InsufficientDecay { .. })
        ));
        assert!(matches!(
            estimate_rt60(&curve),
            Err(MetricError::InsufficientDecay { .. })
        ));
    }

    #[test]
    fn drr_equal_energies_is_zero() {
        let mut samples = vec![0.0; 128];
        samples[0] = 1.0;
        samples[100] = 1.0;
        let drr = measure_drr(&pressure(samples), 0.0).unwrap();
        assert!(drr.abs() < 1e-12);
    }

    #[test]
    fn drr_half_amplitude_reflection() {
        let mut samples = vec![0.0; 128];
        samples[0] = 1.0;
        samples[100] = 0.5;
        let drr = measure_drr(&pressure(samples), 0.0).unwrap();
        assert!((drr - 10.0 * 4.0f64.log10()).abs() < 1e-12); // ~= +6.02 dB
    }

    #[test]
    fn drr_window_absorbs_early_samples() {
        let mut samples = vec![0.0; 200];
        samples[0] = 1.0;
        samples[8] = 0.5; // inside a 1 ms window at 16 kHz
        samples[100] = 0.5;
        let windowed = measure_drr(&pressure(samples), 0.001).unwrap();
        assert!((windowed - 10.0 * (1.25f64 / 0.25).log10()).abs() < 1e-12);
    }

    #[test]
    fn drr_without_reverberant_energy_fails() {
        let mut samples = vec![0.0; 32];
        samples[0] = 1.0;
        assert_eq!(
            measure_drr(&pressure(samples), 0.0),
            Err(MetricError::NoReverberantEnergy)
        );
    }

    #[test]
    fn itdg_finds_first_reflection() {
        let mut samples = vec![0.0; 200];
        samples[0] = 1.0;
        samples[80] = 0.3;
        let itdg = measure_itdg(&pressure(samples), DEFAULT_ITDG_THRESHOLD_DB).unwrap();
        assert!((itdg - 0.005).abs() < 1e-12);
    }

    #[test]
    fn itdg_ignores_sub_threshold_rays() {
        let mut samples = vec![0.0; 200];
        samples[0] = 1.0;
        samples[40] = 0.001; // -60 dB, below the -40 dB default
        samples[80] = 0.3;
        let itdg = measure_itdg(&pressure(samples), DEFAULT_ITDG_THRESHOLD_DB).unwrap();
        assert!((itdg - 0.005).abs() < 1e-12);
    }

    #[test]
    fn itdg_on_pure_impulse_fails() {
        let mut samples = vec![0.0; 32];
        samples[0] = 1.0;
        assert_eq!(
            measure_itdg(&pressure(samples), DEFAULT_ITDG_THRESHOLD_DB),
            Err(MetricError::NoReflectionFound)
        );
    }

    #[test]
    fn itdg_threshold_must_be_negative() {
        let mut samples = vec![0.0; 32];
        samples[0] = 1.0;
        assert!(matches!(
            measure_itdg(&pressure(samples), 3.0),
            Err(MetricError::InvalidThreshold(_))
        ));
    }

    #[test]
    fn measure_all_on_dense_exponential() {
        let report = measure_all(&exponential(0.3, 0.75)).unwrap();
        let rt60 = report.rt60.unwrap().seconds;
        let edt = report.edt.unwrap();
        assert!((rt60 - 0.3).abs() / 0.3 < 0.01);
        assert!((edt - 0.3).abs() / 0.3 < 0.01);
        // dense response: the "first reflection" is the very next sample
        let itdg = report.itdg.unwrap();
        assert!(itdg <= 1.0 / f64::from(SR) + 1e-12);
        assert!(report.drr_db.is_ok());
    }

    #[test]
    fn measure_all_on_silence() {
        assert_eq!(
            measure_all(&pressure(vec![0.0; 16])).unwrap_err(),
            MetricError::SilentInput
        );
    }

    #[test]
    fn estimators_are_scale_invariant() {
        // all definitions are ratios, so gain changes nothing beyond round-off
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y.abs().max(1.0);
        let base = exponential(0.4, 1.0);
        let scaled = pressure(base.amplitudes().iter().map(|x| x * 37.5).collect());
        let a = measure_all(&base).unwrap();
        let b = measure_all(&scaled).unwrap();
        assert!(close(a.rt60.clone().unwrap().seconds, b.rt60.unwrap().seconds));
        assert!(close(a.edt.unwrap(), b.edt.unwrap()));
        assert!(close(a.drr_db.unwrap(), b.drr_db.unwrap()));
        assert_eq!(a.itdg.unwrap(), b.itdg.unwrap());
    }
}
