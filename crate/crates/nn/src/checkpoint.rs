//! Weight checkpoints: `manifest.json` plus one little-endian `f32` file
//! per named parameter.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::param::{Module, Param};
use crate::NnError;

pub const MANIFEST: &str = "manifest.json";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub name: String,
    pub shape: Vec<usize>,
    pub trainable: bool,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub config: ModelConfig,
    pub seed: u64,
    pub tensors: Vec<TensorEntry>,
}

fn file_name(param: &str) -> String {
    let safe: String = param
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '_' { c } else { '_' })
        .collect();
    format!("{safe}.f32")
}

/// Writes every parameter, trainable or not, of `module` under `dir`.
pub fn save<M: Module>(dir: &Path, config: &ModelConfig, seed: u64, module: &M) -> Result<Manifest, NnError> {
    fs::create_dir_all(dir).map_err(|e| NnError::io(dir, e))?;
    let mut tensors = Vec::new();
    let mut result = Ok(());
    module.visit(&mut |p: &Param| {
        if result.is_err() {
            return;
        }
        let file = file_name(&p.name);
        let bytes: Vec<u8> = p.value.iter().flat_map(|&v| (v as f32).to_le_bytes()).collect();
        let path = dir.join(&file);
        result = fs::write(&path, bytes).map_err(|e| NnError::io(&path, e));
        tensors.push(TensorEntry {
            name: p.name.clone(),
            shape: p.shape.clone(),
            trainable: p.trainable,
            file,
        });
    });
    result?;
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        seed,
        tensors,
    };
    let path = dir.join(MANIFEST);
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| NnError::Format(e.to_string()))?;
    fs::write(&path, json).map_err(|e| NnError::io(&path, e))?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, NnError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| NnError::io(&path, e))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| NnError::Format(format!("{}: {e}", path.display())))?;
    if m.format_version != FORMAT_VERSION {
        return Err(NnError::Format(format!("checkpoint version {}", m.format_version)));
    }
    Ok(m)
}

/// Loads values into an already built `module`; names and shapes must match.
pub fn load_into<M: Module>(dir: &Path, module: &mut M) -> Result<Manifest, NnError> {
    let manifest = read_manifest(dir)?;
    let mut expected = Vec::new();
    module.visit(&mut |p: &Param| expected.push((p.name.clone(), p.shape.clone())));
    let listed: Vec<_> = manifest.tensors.iter().map(|t| (t.name.clone(), t.shape.clone())).collect();
    if listed != expected {
        let first = expected
            .iter()
            .zip(&listed)
            .find(|(a, b)| a != b)
            .map(|(a, _)| a.0.clone())
            .unwrap_or_else(|| format!("{} tensors vs {}", listed.len(), expected.len()));
        return Err(NnError::Format(format!("checkpoint does not match model at {first}")));
    }
    let mut values = Vec::with_capacity(manifest.tensors.len());
    for t in &manifest.tensors {
        let path = dir.join(&t.file);
        let bytes = fs::read(&path).map_err(|e| NnError::io(&path, e))?;
        let n: usize = t.shape.iter().product();
        if bytes.len() != 4 * n {
            return Err(NnError::Format(format!("{}: {} bytes for {n} values", path.display(), bytes.len())));
        }
        values.push(
            bytes
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
                .collect::<Vec<_>>(),
        );
    }
    let mut it = values.into_iter();
    module.visit_mut(&mut |p: &mut Param| {
        if let Some(v) = it.next() {
            p.value = v;
        }
    });
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;
    use crate::model::Pecl;

    #[test]
    fn round_trip_rounds_to_f32() {
        let cfg = preset("toy").unwrap();
        let net = Pecl::new(&cfg, 11).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let m = save(dir.path(), &cfg, 11, &net).unwrap();
        assert_eq!(m.tensors.len(), net.param_names().len());
        let mut other = Pecl::new(&cfg, 12).unwrap();
        let loaded = load_into(dir.path(), &mut other).unwrap();
        assert_eq!(loaded, m);
        let mut a = Vec::new();
        net.visit(&mut |p| a.extend(p.value.iter().map(|&v| v as f32 as f64)));
        let mut b = Vec::new();
        other.visit(&mut |p| b.extend_from_slice(&p.value));
        assert_eq!(a, b);
    }

    #[test]
    fn mismatched_model_rejected() {
        let cfg = preset("toy").unwrap();
        let dir = tempfile::tempdir().unwrap();
        save(dir.path(), &cfg, 0, &Pecl::new(&cfg, 0).unwrap()).unwrap();
        let mut other_cfg = cfg.clone();
        other_cfg.head_channels = 24;
        let mut other = Pecl::new(&other_cfg, 0).unwrap();
        assert!(matches!(load_into(dir.path(), &mut other), Err(NnError::Format(_))));
        fs::write(dir.path().join(MANIFEST), "{").unwrap();
        assert!(read_manifest(dir.path()).is_err());
    }
}
