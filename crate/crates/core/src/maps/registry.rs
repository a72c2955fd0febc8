use super::{
    doppler_time_map, range_doppler_map_with, range_time_map_with, AstftConfig, Domain,
    MapError, MtiOptions, SpectroMap,
};
use crate::radar_io::EchoMatrix;

/// One way of turning an echo into a spectrogram domain.
pub trait DomainMapper: Send + Sync {
    /// Registry key, e.g. `rt`.
    fn key(&self) -> &'static str;

    fn domain(&self) -> Domain;

    fn build(&self, echo: &EchoMatrix) -> Result<SpectroMap, MapError>;
}

#[derive(Debug, Clone, Default)]
pub struct RangeTimeMapper {
    pub mti: MtiOptions,
}

impl DomainMapper for RangeTimeMapper {
    fn key(&self) -> &'static str {
        "rt"
    }

    fn domain(&self) -> Domain {
        Domain::RangeTime
    }

    fn build(&self, echo: &EchoMatrix) -> Result<SpectroMap, MapError> {
        range_time_map_with(echo, &self.mti)
    }
}

/// Uses `config` when set, otherwise the defaults for the echo's radar.
#[derive(Debug, Clone, Default)]
pub struct DopplerTimeMapper {
    pub config: Option<AstftConfig>,
}

impl DomainMapper for DopplerTimeMapper {
    fn key(&self) -> &'static str {
        "dt"
    }

    fn domain(&self) -> Domain {
        Domain::DopplerTime
    }

    fn build(&self, echo: &EchoMatrix) -> Result<SpectroMap, MapError> {
        match &self.config {
            Some(cfg) => doppler_time_map(echo, cfg),
            None => doppler_time_map(echo, &AstftConfig::for_params(echo.params())),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RangeDopplerMapper {
    pub mti: MtiOptions,
}

impl DomainMapper for RangeDopplerMapper {
    fn key(&self) -> &'static str {
        "rd"
    }

    fn domain(&self) -> Domain {
        Domain::RangeDoppler
    }

    fn build(&self, echo: &EchoMatrix) -> Result<SpectroMap, MapError> {
        range_doppler_map_with(echo, &self.mti)
    }
}

/// Domain builders looked up by key.
pub struct MapperRegistry {
    mappers: Vec<Box<dyn DomainMapper>>,
}

impl Default for MapperRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(RangeTimeMapper::default()));
        r.register(Box::new(DopplerTimeMapper::default()));
        r.register(Box::new(RangeDopplerMapper::default()));
        r
    }
}

impl MapperRegistry {
    pub fn empty() -> Self {
        Self {
            mappers: Vec::new(),
        }
    }

    /// Adds a mapper, replacing any registered under the same key.
    pub fn register(&mut self, mapper: Box<dyn DomainMapper>) {
        self.mappers.retain(|m| m.key() != mapper.key());
        self.mappers.push(mapper);
    }

    pub fn get(&self, key: &str) -> Result<&dyn DomainMapper, MapError> {
        self.mappers
            .iter()
            .find(|m| m.key() == key)
            .map(|m| m.as_ref())
            .ok_or_else(|| MapError::UnknownDomain(key.to_string()))
    }

    pub fn keys(&self) -> Vec<&'static str> {
        self.mappers.iter().map(|m| m.key()).collect()
    }

    /// Builds every requested domain, in request order.
    pub fn build_all(
        &self,
        echo: &EchoMatrix,
        keys: &[&str],
    ) -> Result<Vec<SpectroMap>, MapError> {
        keys.iter().map(|k| self.get(k)?.build(echo)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_keys() {
        let r = MapperRegistry::default();
        assert_eq!(r.keys(), vec!["rt", "dt", "rd"]);
        assert_eq!(r.get("dt").unwrap().domain(), Domain::DopplerTime);
        assert!(matches!(r.get("xx"), Err(MapError::UnknownDomain(_))));
    }

    #[test]
    fn register_replaces() {
        let mut r = MapperRegistry::default();
        r.register(Box::new(RangeTimeMapper { mti: MtiOptions::off() }));
        assert_eq!(r.keys(), vec!["dt", "rd", "rt"]);
    }
}
