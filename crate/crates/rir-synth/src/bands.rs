//! Octave-band layouts and multiband generation.
//!
//! Real rooms reverberate longer at low frequencies. To approximate that, a
//! response can be generated independently per octave (or third-octave) band
//! with non-increasing RT60 over frequency, band-pass filtered, and summed.

use crate::dsp::bandpass_samples;
use crate::error::{Error, Result};
use crate::params::RirParams;
use crate::response::{generate_rir, to_pressure, PressureImpulseResponse};
use crate::seed::{derive_seed, stream, stream_rng};

/// Ratio between a band's centre and each passband edge for 1/1 octaves.
pub const OCTAVE_EDGE_RATIO: f64 = std::f64::consts::SQRT_2;

/// Edge ratio for 1/3 octaves: the cube root of the octave factor, 2^(1/6).
pub const THIRD_OCTAVE_EDGE_RATIO: f64 = 1.122_462_048_309_373;

/// Lowest centre frequency emitted by the standard layouts.
const MIN_CENTER_HZ: f64 = 60.0;

/// A set of strictly increasing band centre frequencies with a common
/// centre-to-edge ratio. Band `b` passes `[centre/ratio, centre*ratio]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLayout {
    centers_hz: Vec<f64>,
    edge_ratio: f64,
}

impl BandLayout {
    /// Standard 1/1-octave layout: base-two centres anchored at 1 kHz,
    /// spanning from about 62.5 Hz up to (exclusive) the Nyquist frequency.
    pub fn octave(sample_rate: u32) -> Self {
        Self::base_two(sample_rate, 1.0, OCTAVE_EDGE_RATIO)
    }

    /// Standard 1/3-octave layout, centres spaced by 2^(1/3).
    pub fn third_octave(sample_rate: u32) -> Self {
        Self::base_two(sample_rate, 1.0 / 3.0, THIRD_OCTAVE_EDGE_RATIO)
    }

    fn base_two(sample_rate: u32, octave_step: f64, edge_ratio: f64) -> Self {
        let nyquist = f64::from(sample_rate) / 2.0;
        let mut centers = Vec::new();
        let mut n = (MIN_CENTER_HZ / 1000.0).log2() / octave_step;
        n = n.ceil();
        loop {
            let center = 1000.0 * (n * octave_step).exp2();
            if center >= nyquist {
                break;
            }
            centers.push(center);
            n += 1.0;
        }
        Self {
            centers_hz: centers,
            edge_ratio,
        }
    }

    /// A custom layout from explicit centres.
    pub fn from_centers(centers_hz: Vec<f64>, edge_ratio: f64) -> Result<Self> {
        if centers_hz.is_empty() {
            return Err(Error::InvalidBandLayout("no bands".into()));
        }
        if !(edge_ratio.is_finite() && edge_ratio > 1.0) {
            return Err(Error::InvalidBandLayout(format!(
                "edge ratio must exceed 1, got {edge_ratio}"
            )));
        }
        for pair in centers_hz.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidBandLayout(format!(
                    "centres must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if centers_hz[0] <= 0.0 || !centers_hz.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidBandLayout("centres must be positive and finite".into()));
        }
        Ok(Self {
            centers_hz,
            edge_ratio,
        })
    }

    pub fn centers_hz(&self) -> &[f64] {
        &self.centers_hz
    }

    pub fn edge_ratio(&self) -> f64 {
        self.edge_ratio
    }

    pub fn len(&self) -> usize {
        self.centers_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers_hz.is_empty()
    }

    /// Passband edges of band `band`, clipped just below Nyquist.
    pub fn edges(&self, band: usize, sample_rate: u32) -> (f64, f64) {
        let center = self.centers_hz[band];
        let nyquist = f64::from(sample_rate) / 2.0;
        let low = center / self.edge_ratio;
        let high = (center * self.edge_ratio).min(nyquist * (1.0 - 1e-9));
        (low, high)
    }
}

/// Generates one response per band, filters each to its band and sums them.
///
/// All parameter sets must share the sample rate and the seed, which acts as
/// the base: band `b` is generated with `derive_seed(base, b)` so bands stay
/// independent and reproducible. Band responses are converted to pressure,
/// band-pass filtered, zero-padded to the longest band and summed. RT60
/// should not increase with frequency; violations are logged, not rejected.
pub fn generate_multiband_rir(
    band_params: &[RirParams],
    layout: &BandLayout,
) -> Result<PressureImpulseResponse> {
    if band_params.is_empty() {
        return Err(Error::InvalidBandLayout("no bands requested".into()));
    }
    if band_params.len() != layout.len() {
        return Err(Error::InvalidBandLayout(format!(
            "{} parameter sets for {} bands",
            band_params.len(),
            layout.len()
        )));
    }
    let sample_rate = band_params[0].sample_rate();
    let base_seed = band_params[0].seed();
    for p in band_params {
        if p.sample_rate() != sample_rate {
            return Err(Error::InvalidBandLayout(
                "band parameter sets must share one sample rate".into(),
            ));
        }
        if p.seed() != base_seed {
            return Err(Error::InvalidBandLayout(
                "band parameter sets must share one base seed".into(),
            ));
        }
    }
    let nyquist = f64::from(sample_rate) / 2.0;
    if layout.centers_hz().last().copied().unwrap_or(0.0) >= nyquist {
        return Err(Error::InvalidBandLayout(format!(
            "highest centre {} Hz reaches the Nyquist frequency {nyquist} Hz",
            layout.centers_hz().last().unwrap()
        )));
    }
    for (pair, center) in band_params.windows(2).zip(&layout.centers_hz[1..]) {
        if pair[1].rt60() > pair[0].rt60() {
            log::warn!(
                "RT60 increases with frequency at the {center:.0} Hz band \
                 ({} s after {} s)",
                pair[1].rt60(),
                pair[0].rt60()
            );
        }
    }

    let longest = band_params.iter().map(|p| p.buffer_len()).max().unwrap();
    let mut sum = vec![0.0; longest];
    for (band, p) in band_params.iter().enumerate() {
        let seeded = p.with_seed(derive_seed(base_seed, band as u64));
        let tag_band = |source: Error| Error::Band {
            band,
            source: Box::new(source),
        };
        let eir = generate_rir(&seeded).map_err(tag_band)?;
        let pressure = to_pressure(&eir, &mut stream_rng(seeded.seed(), stream::POLARITY));
        let (low, high) = layout.edges(band, sample_rate);
        let filtered = bandpass_samples(pressure.amplitudes(), sample_rate, low, high);
        for (acc, x) in sum.iter_mut().zip(&filtered) {
            *acc += x;
        }
    }
    PressureImpulseResponse::new(sum, sample_rate)
}
