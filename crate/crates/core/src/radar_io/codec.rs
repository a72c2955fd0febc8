use std::path::Path;

use num_complex::Complex64;

use super::{AsciiCodec, BinaryCodec, RadarIoError};

/// Header and payload entries as stored on disk, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecording {
    pub header: [f64; 4],
    pub payload: Vec<Complex64>,
}

/// An on-disk encoding of recordings.
pub trait EchoCodec: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    /// File extension (without the dot) this codec claims.
    fn extension(&self) -> &'static str;

    fn decode(&self, bytes: &[u8]) -> Result<RawRecording, RadarIoError>;

    fn encode(&self, header: &[f64; 4], payload: &[Complex64]) -> Vec<u8>;
}

/// Codecs registered by name and extension.
pub struct CodecRegistry {
    codecs: Vec<Box<dyn EchoCodec>>,
}

impl Default for CodecRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(AsciiCodec));
        r.register(Box::new(BinaryCodec));
        r
    }
}

impl CodecRegistry {
    pub fn empty() -> Self {
        Self { codecs: Vec::new() }
    }

    /// Adds a codec; a later registration with the same name replaces the
    /// earlier one.
    pub fn register(&mut self, codec: Box<dyn EchoCodec>) {
        self.codecs.retain(|c| c.name() != codec.name());
        self.codecs.push(codec);
    }

    pub fn by_name(&self, name: &str) -> Option<&dyn EchoCodec> {
        self.codecs.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn by_extension(&self, ext: &str) -> Option<&dyn EchoCodec> {
        self.codecs
            .iter()
            .find(|c| c.extension().eq_ignore_ascii_case(ext))
            .map(|c| c.as_ref())
    }

    pub fn for_path(&self, path: &Path) -> Result<&dyn EchoCodec, RadarIoError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        self.by_extension(ext)
            .ok_or_else(|| RadarIoError::UnknownExtension(ext.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.codecs.iter().map(|c| c.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_lookup() {
        let r = CodecRegistry::default();
        assert_eq!(r.for_path(Path::new("a/b.dat")).unwrap().name(), "ascii");
        assert_eq!(r.for_path(Path::new("b.DATB")).unwrap().name(), "binary");
        assert!(matches!(
            r.for_path(Path::new("b.wav")),
            Err(RadarIoError::UnknownExtension(e)) if e == "wav"
        ));
        assert_eq!(r.names().collect::<Vec<_>>(), ["ascii", "binary"]);
    }
}
