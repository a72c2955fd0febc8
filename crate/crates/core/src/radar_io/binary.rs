use num_complex::Complex64;

use super::{EchoCodec, RadarIoError, RawRecording};

const MAGIC: &[u8; 4] = b"FMCW";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 * 8 + 8;

/// `FMCW` magic, u32 version, four f64 parameters, u64 entry count, then
/// interleaved `(re, im)` f64 pairs. Everything little-endian.
#[derive(Debug, Clone, Copy, Default)]
pub struct BinaryCodec;

impl EchoCodec for BinaryCodec {
    fn name(&self) -> &'static str {
        "binary"
    }

    fn extension(&self) -> &'static str {
        "datb"
    }

    fn decode(&self, bytes: &[u8]) -> Result<RawRecording, RadarIoError> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(RadarIoError::BadMagic);
        }
        if bytes.len() < 8 {
            return Err(RadarIoError::TruncatedHeader { found: 0 });
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(RadarIoError::UnsupportedVersion(version));
        }
        let mut header = [0.0; 4];
        for (i, h) in header.iter_mut().enumerate() {
            let at = 8 + 8 * i;
            *h = read_f64(bytes, at).ok_or(RadarIoError::TruncatedHeader { found: i })?;
        }
        let count = bytes
            .get(40..48)
            .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
            .ok_or(RadarIoError::TruncatedHeader { found: 4 })?;
        let available = ((bytes.len() - HEADER_LEN.min(bytes.len())) / 16) as u64;
        if count > available {
            return Err(RadarIoError::TruncatedPayload {
                announced: count,
                available,
            });
        }
        let payload = bytes[HEADER_LEN..HEADER_LEN + 16 * count as usize]
            .chunks_exact(16)
            .map(|p| {
                Complex64::new(
                    f64::from_le_bytes(p[..8].try_into().unwrap()),
                    f64::from_le_bytes(p[8..].try_into().unwrap()),
                )
            })
            .collect();
        Ok(RawRecording { header, payload })
    }

    fn encode(&self, header: &[f64; 4], payload: &[Complex64]) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * payload.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        for h in header {
            out.extend_from_slice(&h.to_le_bytes());
        }
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        for z in payload {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }
}

fn read_f64(bytes: &[u8], at: usize) -> Option<f64> {
    bytes
        .get(at..at + 8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let bytes = BinaryCodec.encode(&[5.8e9, 1e-3, 2.0, 4e8], &[Complex64::new(1.0, -2.0)]);
        assert_eq!(bytes.len(), HEADER_LEN + 16);
        assert_eq!(&bytes[..4], b"FMCW");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 5.8e9);
        assert_eq!(u64::from_le_bytes(bytes[40..48].try_into().unwrap()), 1);
        assert_eq!(f64::from_le_bytes(bytes[56..64].try_into().unwrap()), -2.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(BinaryCodec.decode(b"WCMF").unwrap_err(), RadarIoError::BadMagic);
        let mut bytes = BinaryCodec.encode(&[1.0; 4], &[Complex64::new(1.0, 1.0)]);
        bytes[4] = 2;
        assert_eq!(BinaryCodec.decode(&bytes).unwrap_err(), RadarIoError::UnsupportedVersion(2));
        let bytes = BinaryCodec.encode(&[1.0; 4], &[Complex64::new(1.0, 1.0); 3]);
        assert_eq!(
            BinaryCodec.decode(&bytes[..bytes.len() - 1]).unwrap_err(),
            RadarIoError::TruncatedPayload { announced: 3, available: 2 }
        );
        assert_eq!(
            BinaryCodec.decode(&bytes[..20]).unwrap_err(),
            RadarIoError::TruncatedHeader { found: 1 }
        );
    }
}
