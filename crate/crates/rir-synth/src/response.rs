//! Linear-domain impulse responses and the generation pipeline.
//!
//! Step three converts a shaped decay curve to linear energies and normalizes
//! to the peak; step four mutes the initial time delay gap and then deletes
//! rays at random until the direct-to-reverberant ratio reaches its target.
//! [`generate_rir`] composes all four steps deterministically from the seed
//! carried in [`RirParams`].

use rand::Rng;

use crate::decay::{generate_noise_vector, shape_energy_decay_curve, EnergyDecayCurve};
use crate::error::{Error, Result};
use crate::params::RirParams;
use crate::seed::{stream, stream_rng};

/// Probability that a deletion draw targets the early-reflection region.
pub const DEFAULT_EARLY_DELETION_PROBABILITY: f64 = 0.75;

/// How far above the target the initial DRR may sit before sparsification
/// reports the parameter set as inconsistent instead of passing it through.
pub const DRR_ACCEPT_BAND_DB: f64 = 1.0;

/// A sequence of non-negative reflection energies over time.
///
/// Index 0 is the direct ray, which is the peak at energy 1 by construction.
/// Convolving these energies with a dry signal directly yields a usable
/// reverberation effect; use [`to_pressure`] when a signed amplitude response
/// is needed instead.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergeticImpulseResponse {
    energies: Vec<f64>,
    sample_rate: u32,
    params: RirParams,
}

impl EnergeticImpulseResponse {
    /// Builds a response from raw energies, checking the type's invariants:
    /// length `l + 1`, all values in `[0, 1]`, direct ray at exactly 1.
    pub fn from_energies(energies: Vec<f64>, params: &RirParams) -> Result<Self> {
        if energies.len() != params.buffer_len() {
            return Err(Error::InvalidParams(format!(
                "expected {} energy samples, got {}",
                params.buffer_len(),
                energies.len()
            )));
        }
        if energies[0] != 1.0 {
            return Err(Error::InvalidParams(format!(
                "direct ray must carry energy 1, got {}",
                energies[0]
            )));
        }
        for (index, &e) in energies.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::InvalidParams(format!(
                    "energy {e} at index {index} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            energies,
            sample_rate: params.sample_rate(),
            params: *params,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn params(&self) -> &RirParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Direct-to-reverberant ratio of the current energies: the direct ray
    /// against the sum of everything after it.
    pub fn drr_db(&self) -> f64 {
        let reverberant: f64 = self.energies[1..].iter().sum();
        10.0 * (self.energies[0] / reverberant).log10()
    }
}

/// A signed amplitude-domain impulse response; squared samples are energies.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureImpulseResponse {
    amplitudes: Vec<f64>,
    sample_rate: u32,
}

impl PressureImpulseResponse {
    pub fn new(amplitudes: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidParams("sample_rate must be positive".into()));
        }
        if let Some(index) = amplitudes.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            amplitudes,
            sample_rate,
        })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// What sparsification did, alongside the response it produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsifyReport {
    pub initial_drr_db: f64,
    pub final_drr_db: f64,
    pub deletions: usize,
    /// Upper bound on how far the final DRR may sit above the target: the
    /// DRR step of the last deletion, or the acceptance band when the input
    /// already satisfied the target and nothing was deleted.
    pub overshoot_bound_db: f64,
}

/// Step three: convert a shaped curve to linear energies, peak-normalized.
///
/// Levels map through `10^(dB/10)`. Reflection energies are capped at the
/// direct ray's energy so that index 0 stays the peak regardless of the noise
/// deviation, then the whole vector is divided by its maximum (which that cap
/// makes exactly 1).
pub fn edc_to_linear(edc: &EnergyDecayCurve, params: &RirParams) -> EnergeticImpulseResponse {
    debug_assert_eq!(edc.len(), params.buffer_len());
    let mut energies: Vec<f64> = edc
        .levels_db()
        .iter()
        .map(|&db| 10.0_f64.powf(db / 10.0))
        .collect();
    energies[0] = 1.0;
    for e in &mut energies[1..] {
        if *e > 1.0 {
            *e = 1.0;
        }
    }
    let peak = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for e in &mut energies {
        *e /= peak;
    }
    EnergeticImpulseResponse {
        energies,
        sample_rate: edc.sample_rate(),
        params: *params,
    }
}

/// Step four, first half: mute the initial time delay gap.
///
/// Energies at indices `1..=g` are set to exactly zero; the direct ray and
/// everything after the gap are untouched.
pub fn apply_itdg_gap(
    eir: &EnergeticImpulseResponse,
    params: &RirParams,
) -> Result<EnergeticImpulseResponse> {
    let l = params.rt60_samples();
    let g = params.itdg_samples();
    if g >= l.saturating_sub(1) {
        return Err(Error::InvalidParams(format!(
            "itdg gap of {g} samples leaves no reflections (l={l})"
        )));
    }
    let mut out = eir.clone();
    for e in &mut out.energies[1..=g] {
        *e = 0.0;
    }
    Ok(out)
}

/// Step four, second half: delete rays until the DRR target is reached.
///
/// Uses [`DEFAULT_EARLY_DELETION_PROBABILITY`]; see [`sparsify_to_drr_with`].
pub fn sparsify_to_drr<R: Rng + ?Sized>(
    eir: &EnergeticImpulseResponse,
    params: &RirParams,
    rng: &mut R,
) -> Result<EnergeticImpulseResponse> {
    sparsify_to_drr_with(eir, params, DEFAULT_EARLY_DELETION_PROBABILITY, rng)
        .map(|(out, _)| out)
}

/// Deletes one ray at a time until the DRR first crosses the target.
///
/// Each iteration draws a region — early reflections (indices in `(g, k]`)
/// with probability `early_probability`, the remainder `(k, l]` otherwise,
/// falling back to the other region when the chosen one has no survivors —
/// then deletes one surviving ray chosen uniformly within it. The direct ray
/// is never deleted, the reverberant sum is tracked incrementally, and the
/// loop stops at the first crossing, so the DRR before the final deletion is
/// still below the target.
///
/// Inputs already at or above the target are passed through unchanged if they
/// sit within [`DRR_ACCEPT_BAND_DB`] of it; further above, the parameter set
/// is reported as inconsistent via [`Error::InfeasibleDrr`]. If the target is
/// still unreachable when a single reflection remains, the run fails with
/// [`Error::ExhaustedRays`].
pub fn sparsify_to_drr_with<R: Rng + ?Sized>(
    eir: &EnergeticImpulseResponse,
    params: &RirParams,
    early_probability: f64,
    rng: &mut R,
) -> Result<(EnergeticImpulseResponse, SparsifyReport)> {
    if !(0.0..=1.0).contains(&early_probability) {
        return Err(Error::InvalidParams(format!(
            "early deletion probability must lie in [0, 1], got {early_probability}"
        )));
    }
    let l = params.rt60_samples();
    let k = params.edt_samples();
    let g = params.itdg_samples();
    let target = params.drr_db();

    let direct = eir.energies[0];
    let mut reverberant: f64 = eir.energies[1..].iter().sum();
    if reverberant <= 0.0 {
        return Err(Error::InvalidParams(
            "nothing to sparsify: no reverberant energy beyond the direct ray".into(),
        ));
    }

    let initial_drr = 10.0 * (direct / reverberant).log10();
    if initial_drr >= target {
        if initial_drr >= target + DRR_ACCEPT_BAND_DB {
            return Err(Error::InfeasibleDrr {
                initial_db: initial_drr,
                target_db: target,
                band_db: DRR_ACCEPT_BAND_DB,
            });
        }
        let report = SparsifyReport {
            initial_drr_db: initial_drr,
            final_drr_db: initial_drr,
            deletions: 0,
            overshoot_bound_db: DRR_ACCEPT_BAND_DB,
        };
        return Ok((eir.clone(), report));
    }

    let mut energies = eir.energies.clone();
    let mut early: Vec<usize> = (g + 1..=k.min(l)).filter(|&i| energies[i] > 0.0).collect();
    let mut late: Vec<usize> = (k + 1..=l).filter(|&i| energies[i] > 0.0).collect();

    let mut drr = initial_drr;
    let mut deletions = 0usize;
    loop {
        if early.len() + late.len() <= 1 {
            return Err(Error::ExhaustedRays {
                target_db: target,
                reached_db: drr,
                survivors: early.len() + late.len(),
            });
        }
        let region = if rng.random_bool(early_probability) {
            if early.is_empty() {
                &mut late
            } else {
                &mut early
            }
        } else if late.is_empty() {
            &mut early
        } else {
            &mut late
        };
        let slot = rng.random_range(0..region.len());
        let index = region.swap_remove(slot);
        reverberant -= energies[index];
        energies[index] = 0.0;
        deletions += 1;
        debug_assert!(reverberant > 0.0);

        let new_drr = 10.0 * (direct / reverberant).log10();
        if new_drr >= target {
            let report = SparsifyReport {
                initial_drr_db: initial_drr,
                final_drr_db: new_drr,
                deletions,
                overshoot_bound_db: new_drr - drr,
            };
            let out = EnergeticImpulseResponse {
                energies,
                sample_rate: eir.sample_rate,
                params: eir.params,
            };
            return Ok((out, report));
        }
        drr = new_drr;
    }
}

/// Runs the full four-step pipeline for one parameter set.
///
/// The result is a pure function of `params` including its seed: the noise
/// and sparsification streams are derived from it, so repeated calls are
/// bit-identical while different seeds diverge.
pub fn generate_rir(params: &RirParams) -> Result<EnergeticImpulseResponse> {
    generate_rir_with_report(params).map(|(eir, _)| eir)
}

/// Like [`generate_rir`], also returning the sparsification report.
pub fn generate_rir_with_report(
    params: &RirParams,
) -> Result<(EnergeticImpulseResponse, SparsifyReport)> {
    let mut noise_rng = stream_rng(params.seed(), stream::NOISE);
    let noise = generate_noise_vector(params, &mut noise_rng)?;
    let edc = shape_energy_decay_curve(&noise, params)?;
    let linear = edc_to_linear(&edc, params);
    let gapped = apply_itdg_gap(&linear, params)?;
    let mut sparsify_rng = stream_rng(params.seed(), stream::SPARSIFY);
    sparsify_to_drr_with(&gapped, params, DEFAULT_EARLY_DELETION_PROBABILITY, &mut sparsify_rng)
}

/// Converts energies to a signed pressure response.
///
/// `amplitudes[n] = sign * sqrt(energies[n])` with the direct ray positive and
/// every later sign drawn ±1 with equal probability — one draw per reflection
/// slot, muted or not, so the stream position never depends on content.
pub fn to_pressure<R: Rng + ?Sized>(
    eir: &EnergeticImpulseResponse,
    polarity_rng: &mut R,
) -> PressureImpulseResponse {
    let mut amplitudes = Vec::with_capacity(eir.energies.len());
    amplitudes.push(eir.energies[0].sqrt());
    for &e in &eir.energies[1..] {
        let sign = if polarity_rng.random_bool(0.5) { 1.0 } else { -1.0 };
        amplitudes.push(sign * e.sqrt());
    }
    PressureImpulseResponse {
        amplitudes,
        sample_rate: eir.sample_rate,
    }
}
