//! WAV reading and writing.
//!
//! Responses are written as 32-bit float by default: sparsified tails carry
//! ray energies 60 dB and more below the peak, which pcm16 quantization would
//! erase. pcm16 is for augmented speech. Reading accepts mono or stereo
//! pcm16, pcm24 and float32; stereo is downmixed by averaging.

use std::path::Path;

use crate::dsp::AudioBuffer;
use crate::error::{Error, Result};

/// Sample encodings supported for writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavFormat {
    Pcm16,
    Float32,
}

/// pcm16 quantization scale. Writing uses `round(x * 32768)` saturated at
/// +32767, reading divides by 32768, so reading back a file written here
/// reproduces its integer samples bit-exactly and the round-trip error stays
/// within one quantization step.
const PCM16_SCALE: f64 = 32_768.0;

fn spec(sample_rate: u32, format: WavFormat) -> hound::WavSpec {
    match format {
        WavFormat::Pcm16 => hound::WavSpec {
            channels: 1,
            sample_rate,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        },
        WavFormat::Float32 => hound::WavSpec {
            channels: 1,
            sample_rate,
            bits_per_sample: 32,
            sample_format: hound::SampleFormat::Float,
        },
    }
}

/// Writes mono samples to a RIFF/WAVE file.
///
/// pcm16 rejects samples outside `[-1, 1]` with [`Error::Clipping`] before
/// anything is written.
pub fn write_wav(
    path: impl AsRef<Path>,
    samples: &[f64],
    sample_rate: u32,
    format: WavFormat,
) -> Result<()> {
    let path = path.as_ref();
    if format == WavFormat::Pcm16 {
        if let Some(&value) = samples.iter().find(|s| s.abs() > 1.0) {
            return Err(Error::Clipping { value });
        }
    }
    let mut writer =
        hound::WavWriter::create(path, spec(sample_rate, format)).map_err(map_hound(path))?;
    match format {
        WavFormat::Pcm16 => {
            for &s in samples {
                let q = (s * PCM16_SCALE).round().min(32_767.0) as i16;
                writer.write_sample(q).map_err(map_hound(path))?;
            }
        }
        WavFormat::Float32 => {
            for &s in samples {
                writer.write_sample(s as f32).map_err(map_hound(path))?;
            }
        }
    }
    writer.finalize().map_err(map_hound(path))?;
    Ok(())
}

/// Reads a WAV file into a mono buffer with samples normalized to `[-1, 1]`
/// (integer formats; float samples pass through unscaled).
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let mut reader = hound::WavReader::open(path).map_err(map_hound(path))?;
    let spec = reader.spec();
    if spec.channels == 0 || spec.channels > 2 {
        return Err(Error::UnsupportedFormat(format!(
            "{} channels (only mono and stereo are readable)",
            spec.channels
        )));
    }

    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / PCM16_SCALE))
            .collect::<std::result::Result<_, _>>()
            .map_err(map_hound(path))?,
        (hound::SampleFormat::Int, 24) => reader
            .samples::<i32>()
            .map(|s| s.map(|v| f64::from(v) / 8_388_608.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(map_hound(path))?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(map_hound(path))?,
        (format, bits) => {
            return Err(Error::UnsupportedFormat(format!(
                "{bits}-bit {format:?} (supported: pcm16, pcm24, float32)"
            )))
        }
    };

    let mono = if spec.channels == 2 {
        log::info!("downmixing stereo {} to mono by averaging", path.display());
        samples.chunks_exact(2).map(|lr| (lr[0] + lr[1]) / 2.0).collect()
    } else {
        samples
    };
    AudioBuffer::new(mono, spec.sample_rate)
}

fn map_hound(path: &Path) -> impl Fn(hound::Error) -> Error + '_ {
    move |err| match err {
        hound::Error::IoError(io) => Error::Io(io),
        hound::Error::FormatError(detail) => Error::CorruptFile {
            path: path.to_path_buf(),
            detail: detail.to_string(),
        },
        hound::Error::Unsupported => {
            Error::UnsupportedFormat(format!("{}: unsupported encoding", path.display()))
        }
        other => Error::CorruptFile {
            path: path.to_path_buf(),
            detail: other.to_string(),
        },
    }
}
