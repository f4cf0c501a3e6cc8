//! Log-domain energy decay curves: noise generation and slope shaping.
//!
//! These are the first two steps of the synthesis pipeline. A curve starts as
//! uniform level noise around 0 dB, then a piecewise-linear slope is
//! subtracted so that the mean level falls 10 dB across the EDT span and a
//! further 50 dB towards the end of the response.

use rand::distr::{Distribution, Uniform};
use rand::Rng;

use crate::error::{Error, Result};
use crate::params::RirParams;

/// A decay curve in dB, one value per sample slot.
///
/// Index 0 is the direct ray, pinned at exactly 0 dB and excluded from both
/// the noise draw and the slope. Indices `1..=l` (with `l` the RT60 in
/// samples) hold reflection levels.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDecayCurve {
    levels_db: Vec<f64>,
    edt_samples: usize,
    sample_rate: u32,
}

impl EnergyDecayCurve {
    pub fn levels_db(&self) -> &[f64] {
        &self.levels_db
    }

    /// Sample index where the −10 dB milestone lands (`k`).
    pub fn edt_samples(&self) -> usize {
        self.edt_samples
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

/// Step one: draw the reflection-level noise vector.
///
/// Levels at indices `1..=l` are i.i.d. uniform on
/// `[-deviation_db, +deviation_db]` (zero mean), drawn in index order from
/// `rng`. Index 0 stays at 0 dB.
pub fn generate_noise_vector<R: Rng + ?Sized>(
    params: &RirParams,
    rng: &mut R,
) -> Result<EnergyDecayCurve> {
    let l = params.rt60_samples();
    let dev = params.deviation_db();
    let dist = Uniform::new_inclusive(-dev, dev)
        .map_err(|e| Error::InvalidParams(format!("bad deviation range: {e}")))?;

    let mut levels = Vec::with_capacity(l + 1);
    levels.push(0.0);
    levels.extend((0..l).map(|_| dist.sample(rng)));

    Ok(EnergyDecayCurve {
        levels_db: levels,
        edt_samples: params.edt_samples(),
        sample_rate: params.sample_rate(),
    })
}

/// Step two: subtract the decay slope from the noise vector.
///
/// For reflection index `i` (1-based, direct ray excluded) the level drops by
///
/// * `10 * i / k` dB while `i <= k`, and
/// * `10 + 50 * (i - k) / l` dB for `i > k`,
///
/// so the mean level reaches −10 dB at the EDT mark and
/// `-(10 + 50 * (l - k) / l)` dB at the final sample.
pub fn shape_energy_decay_curve(
    noise: &EnergyDecayCurve,
    params: &RirParams,
) -> Result<EnergyDecayCurve> {
    let l = params.rt60_samples();
    let k = params.edt_samples();
    if k == 0 || k >= l {
        return Err(Error::InvalidParams(format!(
            "edt must span (0, rt60) in samples, got k={k} with l={l}"
        )));
    }
    if noise.len() != l + 1 {
        return Err(Error::InvalidParams(format!(
            "curve length {} does not match rt60 of {l} samples (need {})",
            noise.len(),
            l + 1
        )));
    }

    let mut levels = noise.levels_db.clone();
    let (k_f, l_f) = (k as f64, l as f64);
    for (i, level) in levels.iter_mut().enumerate().skip(1) {
        let drop = if i <= k {
            10.0 * i as f64 / k_f
        } else {
            10.0 + 50.0 * (i - k) as f64 / l_f
        };
        *level -= drop;
    }

    Ok(EnergyDecayCurve {
        levels_db: levels,
        edt_samples: k,
        sample_rate: noise.sample_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{stream, stream_rng};

    fn params(rt60: f64, edt: f64, deviation_db: f64) -> RirParams {
        RirParams::new(rt60, edt, 0.005, -3.0, deviation_db, 16_000, 42).unwrap()
    }

    #[test]
    fn zero_deviation_noise_is_flat() {
        let p = params(0.5, 0.05, 0.0);
        let mut rng = stream_rng(p.seed(), stream::NOISE);
        let noise = generate_noise_vector(&p, &mut rng).unwrap();
        assert_eq!(noise.len(), 8001);
        assert!(noise.levels_db().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn noise_respects_bounds_and_is_centred() {
        let p = params(0.5, 0.05, 6.0);
        let mut rng = stream_rng(p.seed(), stream::NOISE);
        let noise = generate_noise_vector(&p, &mut rng).unwrap();
        assert_eq!(noise.levels_db()[0], 0.0);
        assert!(noise.levels_db()[1..].iter().all(|&v| (-6.0..=6.0).contains(&v)));
        let mean = noise.levels_db()[1..].iter().sum::<f64>() / 8000.0;
        // standard error of the mean is ~0.039 dB here
        assert!(mean.abs() < 0.2, "sample mean {mean} too far from 0 dB");
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let p = params(0.3, 0.05, 6.0);
        let a = generate_noise_vector(&p, &mut stream_rng(p.seed(), stream::NOISE)).unwrap();
        let b = generate_noise_vector(&p, &mut stream_rng(p.seed(), stream::NOISE)).unwrap();
        assert_eq!(a.levels_db(), b.levels_db());
    }

    #[test]
    fn shaped_flat_curve_matches_closed_forms() {
        let p = params(0.5, 0.05, 0.0);
        let (l, k) = (p.rt60_samples(), p.edt_samples());
        let noise = generate_noise_vector(&p, &mut stream_rng(0, stream::NOISE)).unwrap();
        let edc = shape_energy_decay_curve(&noise, &p).unwrap();
        let lv = edc.levels_db();
        assert_eq!(lv[0], 0.0);
        assert!((lv[k / 2] - -5.0).abs() < 1e-12);
        assert!((lv[k] - -10.0).abs() < 1e-12);
        let expected_end = -(10.0 + 50.0 * (l - k) as f64 / l as f64);
        assert!((lv[l] - expected_end).abs() < 1e-12);
    }

    #[test]
    fn shaping_preserves_noise_offsets() {
        let p = params(0.25, 0.05, 6.0);
        let noise = generate_noise_vector(&p, &mut stream_rng(0, stream::NOISE)).unwrap();
        let edc = shape_energy_decay_curve(&noise, &p).unwrap();
        let k = p.edt_samples();
        let i = k / 3;
        let expected = noise.levels_db()[i] - 10.0 * i as f64 / k as f64;
        assert_eq!(edc.levels_db()[i], expected);
    }

    #[test]
    fn shape_rejects_length_mismatch() {
        let short = params(0.25, 0.05, 0.0);
        let long = params(0.5, 0.05, 0.0);
        let noise = generate_noise_vector(&short, &mut stream_rng(0, stream::NOISE)).unwrap();
        assert!(shape_energy_decay_curve(&noise, &long).is_err());
    }
}
