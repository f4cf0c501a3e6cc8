//! Stochastic room impulse response synthesis and measurement.
//!
//! This crate builds room impulse responses directly from acoustic
//! parameters — RT60, EDT, DRR and ITDG — instead of simulating a room
//! geometry. A response is synthesized in four steps: draw uniform level
//! noise, shape it with the target decay slopes, convert to linear energies,
//! then carve the energy distribution (initial gap plus random ray deletion)
//! until the direct-to-reverberant ratio is reached. Everything is a pure
//! function of an explicit 64-bit seed.
//!
//! The estimators in [`metrics`] close the loop: they recover the same four
//! parameters from any pressure-domain response, so generated output can be
//! validated without trusting the generator.
//!
//! ```
//! use rir_synth::{generate_rir, to_pressure, RirParams};
//! use rir_synth::metrics::measure_all;
//! use rir_synth::seed::{stream, stream_rng};
//!
//! # fn main() -> rir_synth::Result<()> {
//! let params = RirParams::new(0.3, 0.05, 0.005, -4.0, 6.0, 16_000, 42)?;
//! let rir = generate_rir(&params)?;
//! assert_eq!(rir.len(), params.rt60_samples() + 1);
//!
//! let pressure = to_pressure(&rir, &mut stream_rng(params.seed(), stream::POLARITY));
//! let measured = measure_all(&pressure).expect("response is not silent");
//! assert!(measured.drr_db.unwrap() >= params.drr_db());
//! # Ok(())
//! # }
//! ```

pub mod bands;
pub mod decay;
pub mod dsp;
pub mod error;
pub mod metrics;
pub mod params;
pub mod response;
pub mod sampler;
pub mod seed;
pub mod sidecar;
pub mod wav;

pub use decay::{generate_noise_vector, shape_energy_decay_curve, EnergyDecayCurve};
pub use error::{Error, MetricError, Result};
pub use params::RirParams;
pub use response::{
    apply_itdg_gap, edc_to_linear, generate_rir, generate_rir_with_report, sparsify_to_drr,
    sparsify_to_drr_with, to_pressure, EnergeticImpulseResponse, PressureImpulseResponse,
    SparsifyReport,
};

// The guide chapters double as documentation tests: every fenced Rust block
// in book/src compiles and runs under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(acoustic_parameters, "../../../book/src/acoustic-parameters.md");
    chapter!(generation_pipeline, "../../../book/src/generation-pipeline.md");
    chapter!(measuring_responses, "../../../book/src/measuring-responses.md");
    chapter!(sampling_and_seeds, "../../../book/src/sampling-and-seeds.md");
    chapter!(convolution, "../../../book/src/convolution.md");
    chapter!(multiband, "../../../book/src/multiband.md");
    chapter!(command_line, "../../../book/src/command-line.md");
    chapter!(file_formats, "../../../book/src/file-formats.md");
}
