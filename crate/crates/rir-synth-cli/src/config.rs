use std::path::Path;

use rir_synth::sampler::ParamRanges;

use crate::CliError;

/// Overrides the default configuration path when no `--config` is given.
pub const CONFIG_ENV_VAR: &str = "RIRSYNTH_CONFIG";

/// Loads parameter ranges from an explicit path, the environment variable,
/// or falls back to the built-in defaults.
pub fn load_ranges(explicit: Option<&Path>) -> Result<ParamRanges, CliError> {
    let from_env = std::env::var_os(CONFIG_ENV_VAR).map(std::path::PathBuf::from);
    let path = match (explicit, &from_env) {
        (Some(path), _) => Some(path),
        (None, Some(path)) => Some(path.as_path()),
        (None, None) => None,
    };
    let ranges = match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|err| {
                CliError::Config(format!("cannot read config {}: {err}", path.display()))
            })?;
            toml::from_str::<ParamRanges>(&text).map_err(|err| {
                CliError::Config(format!("invalid config {}: {err}", path.display()))
            })?
        }
        None => ParamRanges::default(),
    };
    ranges
        .validate()
        .map_err(|err| CliError::Config(err.to_string()))?;
    Ok(ranges)
}

/// Lists `*.wav` files directly inside `dir`, sorted by file name so every
/// derived index is stable across runs and platforms.
pub fn sorted_wavs(dir: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|err| CliError::Config(format!("cannot list {}: {err}", dir.display())))?;
    let mut files: Vec<std::path::PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| {
            path.is_file()
                && path
                    .extension()
                    .is_some_and(|ext| ext.eq_ignore_ascii_case("wav"))
        })
        .collect();
    files.sort();
    Ok(files)
}
