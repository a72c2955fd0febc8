pub mod augment;
pub mod eval;
pub mod gradcheck;
pub mod maps;
pub mod params;
pub mod parse;
pub mod synth;
pub mod train_toy;

use std::path::Path;

use crate::CliError;

pub(crate) fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))
}

/// Creates the parent directory of a file output.
pub(crate) fn create_parent(file: &Path) -> Result<(), CliError> {
    match file.parent() {
        Some(p) if !p.as_os_str().is_empty() => create_dir(p),
        _ => Ok(()),
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn write_json(path: &Path, v: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| CliError::write(path, e))
}

pub(crate) fn read_echo(path: &Path) -> Result<pecl_core::radar_io::Recording, CliError> {
    pecl_core::radar_io::read_file(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
