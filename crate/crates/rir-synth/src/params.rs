//! Acoustic parameter sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rounds a duration in seconds to a whole number of samples, halves up.
pub(crate) fn seconds_to_samples(seconds: f64, sample_rate: u32) -> usize {
    (seconds * f64::from(sample_rate)).round() as usize
}

/// One complete acoustic parameter set for a single impulse response.
///
/// All durations are accepted in seconds and converted to sample counts once,
/// inside the constructor. A `RirParams` can only be built through
/// [`RirParams::new`], so a value of this type always satisfies the
/// invariants the generation pipeline relies on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct RirParams {
    /// Time for the reverberant energy to decay by 60 dB, in seconds.
    #[serde(rename = "rt60_s")]
    rt60: f64,
    /// Time for the early energy to decay by 10 dB, in seconds.
    #[serde(rename = "edt_s")]
    edt: f64,
    /// Gap between the direct sound and the first reflection, in seconds.
    #[serde(rename = "itdg_s")]
    itdg: f64,
    /// Target direct-to-reverberant ratio, in dB.
    #[serde(rename = "drr_db")]
    drr_db: f64,
    /// Half-width of the uniform reflection-level noise, in dB.
    #[serde(rename = "deviation_db")]
    deviation_db: f64,
    #[serde(rename = "sample_rate_hz")]
    sample_rate: u32,
    seed: u64,
}

#[derive(Deserialize)]
struct RawParams {
    rt60_s: f64,
    edt_s: f64,
    itdg_s: f64,
    drr_db: f64,
    deviation_db: f64,
    sample_rate_hz: u32,
    seed: u64,
}

impl TryFrom<RawParams> for RirParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        RirParams::new(
            raw.rt60_s,
            raw.edt_s,
            raw.itdg_s,
            raw.drr_db,
            raw.deviation_db,
            raw.sample_rate_hz,
            raw.seed,
        )
    }
}

impl RirParams {
    /// Default half-width of the reflection-level noise distribution.
    pub const DEFAULT_DEVIATION_DB: f64 = 6.0;

    pub fn new(
        rt60: f64,
        edt: f64,
        itdg: f64,
        drr_db: f64,
        deviation_db: f64,
        sample_rate: u32,
        seed: u64,
    ) -> Result<Self> {
        let params = Self {
            rt60,
            edt,
            itdg,
            drr_db,
            deviation_db,
            sample_rate,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        for (name, value) in [
            ("rt60", self.rt60),
            ("edt", self.edt),
            ("itdg", self.itdg),
            ("drr_db", self.drr_db),
            ("deviation_db", self.deviation_db),
        ] {
            if !value.is_finite() {
                return fail(format!("{name} must be finite, got {value}"));
            }
        }
        if self.sample_rate == 0 {
            return fail("sample_rate must be positive".into());
        }
        if self.rt60 <= 0.0 {
            return fail(format!("rt60 must be positive, got {} s", self.rt60));
        }
        if self.edt <= 0.0 || self.edt >= self.rt60 {
            return fail(format!(
                "edt must lie in (0, rt60), got {} s with rt60 {} s",
                self.edt, self.rt60
            ));
        }
        if self.itdg < 0.0 {
            return fail(format!("itdg must be non-negative, got {} s", self.itdg));
        }
        if self.deviation_db < 0.0 {
            return fail(format!(
                "deviation_db must be non-negative, got {} dB",
                self.deviation_db
            ));
        }
        let l = self.rt60_samples();
        let k = self.edt_samples();
        let g = self.itdg_samples();
        if l < 2 {
            return fail(format!("rt60 of {} s spans only {l} sample(s)", self.rt60));
        }
        if k == 0 || k >= l {
            return fail(format!("edt must span (0, rt60) in samples, got k={k} with l={l}"));
        }
        // the gap must leave at least one deletable ray
        if g >= l - 1 {
            return fail(format!("itdg gap of {g} samples leaves no reflections (l={l})"));
        }
        Ok(())
    }

    pub fn rt60(&self) -> f64 {
        self.rt60
    }

    pub fn edt(&self) -> f64 {
        self.edt
    }

    pub fn itdg(&self) -> f64 {
        self.itdg
    }

    pub fn drr_db(&self) -> f64 {
        self.drr_db
    }

    pub fn deviation_db(&self) -> f64 {
        self.deviation_db
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// RT60 in samples: the number of reflection slots, `l`.
    ///
    /// Stored responses carry one extra leading sample for the direct ray,
    /// so their buffer length is `l + 1`. Reported sample counts follow this
    /// value, not the buffer length.
    pub fn rt60_samples(&self) -> usize {
        seconds_to_samples(self.rt60, self.sample_rate)
    }

    /// EDT in samples (`k`): the reflection index where the −10 dB milestone lands.
    pub fn edt_samples(&self) -> usize {
        seconds_to_samples(self.edt, self.sample_rate)
    }

    /// ITDG in samples (`g`): reflections 1..=g are muted.
    pub fn itdg_samples(&self) -> usize {
        seconds_to_samples(self.itdg, self.sample_rate)
    }

    /// Length of the stored response buffer (direct ray plus `l` reflections).
    pub fn buffer_len(&self) -> usize {
        self.rt60_samples() + 1
    }

    /// Returns a copy with a different seed, all acoustic values unchanged.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
