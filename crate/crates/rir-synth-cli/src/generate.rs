use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rir_synth::bands::{generate_multiband_rir, BandLayout};
use rir_synth::metrics::measure_all;
use rir_synth::response::{generate_rir_with_report, to_pressure};
use rir_synth::sampler::{sample_batch, ParamRanges};
use rir_synth::seed::{stream, stream_rng};
use rir_synth::sidecar::{
    write_sidecar, MeasuredRecord, RirMode, RirRecord, SIDECAR_SCHEMA_VERSION, TOOL_VERSION,
};
use rir_synth::wav::{write_wav, WavFormat};
use rir_synth::RirParams;

use crate::{config, CliError, EXIT_RUNTIME};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Non-negative reflection energies, convolved directly (the default)
    Energetic,
    /// Signed amplitudes: square roots of the energies with random polarity
    Pressure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandsArg {
    /// One response per 1/1-octave band, summed
    Octave,
    /// One response per 1/3-octave band, summed
    ThirdOctave,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Number of responses to generate
    #[arg(long)]
    count: usize,
    /// Output directory for WAVs, sidecars and the manifest
    #[arg(long)]
    out: PathBuf,
    /// TOML file with parameter ranges (defaults embed the standard training ranges)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; item i derives its own seed from (seed, i)
    #[arg(long)]
    seed: Option<u64>,
    /// Output domain; defaults to energetic, or pressure when --bands is set
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Generate per-octave-band responses with decreasing RT60 and sum them
    #[arg(long, value_enum)]
    bands: Option<BandsArg>,
    /// Measure each response and embed the results in its sidecar
    #[arg(long)]
    validate: bool,
    /// Worker threads (defaults to the number of cores)
    #[arg(long)]
    jobs: Option<usize>,
}

/// RT60 taper across bands: the highest band decays in half the time of the
/// lowest, interpolated linearly over band index.
const TOP_BAND_RT60_FACTOR: f64 = 0.5;
/// Per-band EDT is capped at this fraction of the band's tapered RT60.
const MAX_EDT_FRACTION: f64 = 0.45;

#[derive(Debug, Serialize, Deserialize)]
struct ManifestItem {
    index: usize,
    seed: u64,
    file: String,
    status: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    tool_version: String,
    count: usize,
    mode: RirMode,
    ranges: ParamRanges,
    items: Vec<ManifestItem>,
}

#[derive(Serialize)]
struct ValidationSummary {
    rt60_median_rel_err: f64,
    rt60_max_rel_err: f64,
    drr_measured_below_target: usize,
    itdg_measured_below_request: usize,
}

#[derive(Serialize)]
struct RunSummary {
    count: usize,
    succeeded: usize,
    failed: usize,
    out_dir: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<ValidationSummary>,
}

struct ItemOutcome {
    index: usize,
    seed: u64,
    file: String,
    status: Result<Option<(RirParams, MeasuredRecord)>, String>,
}

pub fn run(args: GenerateArgs) -> Result<u8, CliError> {
    if args.count == 0 {
        return Err(CliError::Config("--count must be at least 1".into()));
    }
    if matches!(args.jobs, Some(0)) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let mode = match (args.mode, args.bands) {
        (Some(ModeArg::Energetic), Some(_)) => {
            return Err(CliError::Config(
                "--bands sums band-pass filtered (signed) responses, which have no \
                 energetic form; drop --mode energetic"
                    .into(),
            ))
        }
        (Some(ModeArg::Pressure), _) | (None, Some(_)) => RirMode::Pressure,
        (Some(ModeArg::Energetic), None) | (None, None) => RirMode::Energetic,
    };

    let mut ranges = config::load_ranges(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        ranges.base_seed = seed;
    }
    let batch = sample_batch(&ranges, args.count).map_err(|err| CliError::Config(err.to_string()))?;
    std::fs::create_dir_all(&args.out)
        .map_err(|err| CliError::Config(format!("cannot create {}: {err}", args.out.display())))?;

    let layout = args.bands.map(|bands| match bands {
        BandsArg::Octave => BandLayout::octave(ranges.sample_rate),
        BandsArg::ThirdOctave => BandLayout::third_octave(ranges.sample_rate),
    });
    if let Some(layout) = &layout {
        if layout.is_empty() {
            return Err(CliError::Config(format!(
                "no octave bands fit below the Nyquist frequency of {} Hz",
                ranges.sample_rate / 2
            )));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0)) // 0 lets rayon pick
        .build()
        .map_err(|err| CliError::Config(format!("cannot build worker pool: {err}")))?;

    let out_dir = args.out.clone();
    let validate = args.validate;
    let outcomes: Vec<ItemOutcome> = pool.install(|| {
        batch
            .items
            .par_iter()
            .enumerate()
            .map(|(index, params)| {
                let file = format!("rir_{index:06}.wav");
                let status =
                    generate_item(params, layout.as_ref(), mode, validate, &out_dir, &file);
                if let Err(message) = &status {
                    log::error!("item {index} (seed {:#018x}): {message}", params.seed());
                }
                ItemOutcome {
                    index,
                    seed: params.seed(),
                    file,
                    status,
                }
            })
            .collect()
    });

    let manifest = Manifest {
        schema_version: SIDECAR_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        count: args.count,
        mode,
        ranges,
        items: outcomes
            .iter()
            .map(|outcome| ManifestItem {
                index: outcome.index,
                seed: outcome.seed,
                file: outcome.file.clone(),
                status: match &outcome.status {
                    Ok(_) => "ok".to_string(),
                    Err(message) => format!("failed: {message}"),
                },
            })
            .collect(),
    };
    let manifest_path = args.out.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|err| CliError::Runtime(err.to_string()))?;
    text.push('\n');
    std::fs::write(&manifest_path, text)
        .map_err(|err| CliError::Runtime(format!("cannot write manifest: {err}")))?;

    let failed = outcomes.iter().filter(|o| o.status.is_err()).count();
    let validation = validate.then(|| summarize_validation(&outcomes));
    let summary = RunSummary {
        count: args.count,
        succeeded: args.count - failed,
        failed,
        out_dir: args.out.display().to_string(),
        validation,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).map_err(|err| CliError::Runtime(err.to_string()))?
    );

    Ok(if failed > 0 { EXIT_RUNTIME } else { 0 })
}

fn generate_item(
    params: &RirParams,
    layout: Option<&BandLayout>,
    mode: RirMode,
    validate: bool,
    out_dir: &std::path::Path,
    file: &str,
) -> Result<Option<(RirParams, MeasuredRecord)>, String> {
    let pressure;
    let samples: Vec<f64> = match layout {
        Some(layout) => {
            let band_params = taper_bands(params, layout.len()).map_err(|e| e.to_string())?;
            pressure = generate_multiband_rir(&band_params, layout).map_err(|e| e.to_string())?;
            pressure.amplitudes().to_vec()
        }
        None => {
            let (rir, _) = generate_rir_with_report(params).map_err(|e| e.to_string())?;
            match mode {
                RirMode::Pressure => {
                    pressure =
                        to_pressure(&rir, &mut stream_rng(params.seed(), stream::POLARITY));
                    pressure.amplitudes().to_vec()
                }
                RirMode::Energetic => {
                    // measurement always runs on the pressure form
                    pressure =
                        to_pressure(&rir, &mut stream_rng(params.seed(), stream::POLARITY));
                    rir.energies().to_vec()
                }
            }
        }
    };

    let wav_path = out_dir.join(file);
    write_wav(&wav_path, &samples, params.sample_rate(), WavFormat::Float32)
        .map_err(|e| e.to_string())?;

    let mut record = RirRecord::new(file, mode, *params);
    let mut measured_out = None;
    if validate {
        let measured = measure_all(&pressure).map_err(|e| e.to_string())?;
        record = record.with_measured(&measured);
        measured_out = Some((*params, MeasuredRecord::from(&measured)));
    }
    let sidecar_path = wav_path.with_extension("json");
    write_sidecar(&record, sidecar_path).map_err(|e| e.to_string())?;
    Ok(measured_out)
}

/// Splits one sampled parameter set into per-band sets with RT60 falling
/// linearly to half at the highest band. All bands share the item seed; the
/// per-band generation seeds are derived inside the multiband generator.
fn taper_bands(params: &RirParams, bands: usize) -> rir_synth::Result<Vec<RirParams>> {
    (0..bands)
        .map(|band| {
            let factor = if bands == 1 {
                1.0
            } else {
                1.0 - (1.0 - TOP_BAND_RT60_FACTOR) * band as f64 / (bands - 1) as f64
            };
            let rt60 = params.rt60() * factor;
            let edt = params.edt().min(MAX_EDT_FRACTION * rt60);
            RirParams::new(
                rt60,
                edt,
                params.itdg(),
                params.drr_db(),
                params.deviation_db(),
                params.sample_rate(),
                params.seed(),
            )
        })
        .collect()
}

fn summarize_validation(outcomes: &[ItemOutcome]) -> ValidationSummary {
    let mut rt60_errs = Vec::new();
    let mut drr_below = 0usize;
    let mut itdg_below = 0usize;
    for outcome in outcomes {
        let Ok(Some((requested, measured))) = &outcome.status else {
            continue;
        };
        if let Some(rt60) = measured.rt60_s {
            rt60_errs.push(((rt60 - requested.rt60()) / requested.rt60()).abs());
        }
        if let Some(drr) = measured.drr_db {
            if drr < requested.drr_db() - 1e-9 {
                drr_below += 1;
            }
        }
        if let Some(itdg) = measured.itdg_s {
            if itdg < requested.itdg() {
                itdg_below += 1;
            }
        }
    }
    rt60_errs.sort_by(f64::total_cmp);
    let median = if rt60_errs.is_empty() {
        f64::NAN
    } else if rt60_errs.len() % 2 == 1 {
        rt60_errs[rt60_errs.len() / 2]
    } else {
        (rt60_errs[rt60_errs.len() / 2 - 1] + rt60_errs[rt60_errs.len() / 2]) / 2.0
    };
    ValidationSummary {
        rt60_median_rel_err: median,
        rt60_max_rel_err: rt60_errs.last().copied().unwrap_or(f64::NAN),
        drr_measured_below_target: drr_below,
        itdg_measured_below_request: itdg_below,
    }
}
