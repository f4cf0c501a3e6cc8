//! Seeded sampling of parameter sets from configured ranges.
//!
//! A [`ParamRanges`] value describes a class of virtual rooms; drawing from
//! it yields concrete [`RirParams`] items. Item `i` depends only on the
//! ranges and `i` (its seed is `derive_seed(base_seed, i)`), so batches can
//! be regenerated partially, extended, or evaluated in parallel without
//! changing any item.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::RirParams;
use crate::seed::{derive_seed, stream, stream_rng};

/// How many joint redraws [`sample`] attempts before declaring the ranges
/// unsatisfiable.
pub const MAX_SAMPLE_ATTEMPTS: usize = 100;

/// An inclusive `[min, max]` interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    /// A degenerate single-point range.
    pub fn point(value: f64) -> Self {
        Self {
            min: value,
            max: value,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.min..=self.max).contains(&value)
    }

    fn check(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::UnsatisfiableRanges(format!(
                "{name} range [{}, {}] is not a valid interval",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.min..=self.max)
    }
}

/// Min/max bounds per parameter, the schema of the generator configuration.
///
/// The defaults reproduce the augmentation setup the method was introduced
/// with: RT60 0.2–0.7 s, EDT 50–100 ms, ITDG 3–10 ms, DRR −7–0 dB at 16 kHz,
/// with the level deviation fixed at 6 dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamRanges {
    pub rt60_s: Range,
    pub edt_s: Range,
    pub itdg_s: Range,
    pub drr_db: Range,
    pub deviation_db: Range,
    pub sample_rate: u32,
    pub base_seed: u64,
}

impl Default for ParamRanges {
    fn default() -> Self {
        Self {
            rt60_s: Range::new(0.2, 0.7),
            edt_s: Range::new(0.05, 0.1),
            itdg_s: Range::new(0.003, 0.01),
            drr_db: Range::new(-7.0, 0.0),
            deviation_db: Range::point(RirParams::DEFAULT_DEVIATION_DB),
            sample_rate: 16_000,
            base_seed: 0,
        }
    }
}

impl ParamRanges {
    pub fn validate(&self) -> Result<()> {
        self.rt60_s.check("rt60_s")?;
        self.edt_s.check("edt_s")?;
        self.itdg_s.check("itdg_s")?;
        self.drr_db.check("drr_db")?;
        self.deviation_db.check("deviation_db")?;
        if self.rt60_s.min <= 0.0 {
            return Err(Error::UnsatisfiableRanges(
                "rt60_s must be strictly positive".into(),
            ));
        }
        if self.edt_s.min <= 0.0 {
            return Err(Error::UnsatisfiableRanges(
                "edt_s must be strictly positive".into(),
            ));
        }
        if self.itdg_s.min < 0.0 {
            return Err(Error::UnsatisfiableRanges(
                "itdg_s must be non-negative".into(),
            ));
        }
        if self.deviation_db.min < 0.0 {
            return Err(Error::UnsatisfiableRanges(
                "deviation_db must be non-negative".into(),
            ));
        }
        if self.sample_rate == 0 {
            return Err(Error::UnsatisfiableRanges(
                "sample_rate must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Draws item `index` from the ranges.
///
/// Each parameter is drawn uniformly and independently, in the fixed order
/// rt60, edt, itdg, drr, deviation. When a joint draw violates a parameter
/// invariant (say edt >= rt60), the draw is repeated from the same stream, up
/// to [`MAX_SAMPLE_ATTEMPTS`] times. The result depends only on
/// `(ranges, index)`.
pub fn sample(ranges: &ParamRanges, index: u64) -> Result<RirParams> {
    ranges.validate()?;
    let item_seed = derive_seed(ranges.base_seed, index);
    let mut rng = stream_rng(item_seed, stream::SAMPLER);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let rt60 = ranges.rt60_s.draw(&mut rng);
        let edt = ranges.edt_s.draw(&mut rng);
        let itdg = ranges.itdg_s.draw(&mut rng);
        let drr = ranges.drr_db.draw(&mut rng);
        let deviation = ranges.deviation_db.draw(&mut rng);
        if let Ok(params) = RirParams::new(
            rt60,
            edt,
            itdg,
            drr,
            deviation,
            ranges.sample_rate,
            item_seed,
        ) {
            return Ok(params);
        }
    }
    Err(Error::UnsatisfiableRanges(format!(
        "no valid parameter set after {MAX_SAMPLE_ATTEMPTS} draws at index {index}; \
         the configured ranges are contradictory"
    )))
}

/// A batch of sampled parameter sets; item `i` of `items` is index `i`.
#[derive(Debug, Clone)]
pub struct SampledBatch {
    pub ranges: ParamRanges,
    pub items: Vec<RirParams>,
}

/// Samples indices `0..count`. Order-independent by construction.
pub fn sample_batch(ranges: &ParamRanges, count: usize) -> Result<SampledBatch> {
    let items = (0..count as u64)
        .map(|i| sample(ranges, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledBatch {
        ranges: *ranges,
        items,
    })
}
