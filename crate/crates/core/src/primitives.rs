use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoreError;

fn decode_fixed_hex(field: &'static str, text: &str, want: usize, out: &mut [u8]) -> Result<(), CoreError> {
    let body = text
        .strip_prefix("0x")
        .ok_or_else(|| CoreError::parse(field, format!("missing 0x prefix in {text:?}")))?;
    if body.len() != want * 2 {
        return Err(CoreError::parse(
            field,
            format!("expected {} hex chars, got {}", want * 2, body.len()),
        ));
    }
    hex::decode_to_slice(body, out)
        .map_err(|e| CoreError::parse(field, format!("non-hex character: {e}")))
}

/// 20-byte account identifier.
///
/// Parsing accepts mixed-case hex; serialization always emits the canonical
/// lowercase form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(pub [u8; 20]);

impl Address {
    pub const ZERO: Address = Address([0u8; 20]);

    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0u8; 20]
    }

    /// Takes the low 20 bytes of a 32-byte word, requiring the high 12 bytes
    /// to be zero.
    pub fn from_word(word: &[u8; 32]) -> Option<Address> {
        if word[..12].iter().any(|b| *b != 0) {
            return None;
        }
        let mut out = [0u8; 20];
        out.copy_from_slice(&word[12..]);
        Some(Address(out))
    }
}

impl FromStr for Address {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 20];
        decode_fixed_hex("address", s, 20, &mut out)?;
        Ok(Address(out))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(self.0))
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({self})")
    }
}

/// 32-byte identifier (block hash, transaction hash, log topic).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hash32(pub [u8; 32]);

impl Hash32 {
    pub const ZERO: Hash32 = Hash32([0u8; 32]);

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl FromStr for Hash32 {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 32];
        decode_fixed_hex("hash", s, 32, &mut out)?;
        Ok(Hash32(out))
    }
}

impl fmt::Display for Hash32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(self.0))
    }
}

impl fmt::Debug for Hash32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hash32({self})")
    }
}

/// Variable-length byte sequence carried as raw bytes internally and
/// `0x`-hex at I/O edges.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bytes(pub Vec<u8>);

impl Bytes {
    pub fn new() -> Bytes {
        Bytes(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Bytes {
    fn from(v: Vec<u8>) -> Bytes {
        Bytes(v)
    }
}

impl From<&[u8]> for Bytes {
    fn from(v: &[u8]) -> Bytes {
        Bytes(v.to_vec())
    }
}

impl FromStr for Bytes {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix("0x")
            .ok_or_else(|| CoreError::parse("bytes", "missing 0x prefix".to_string()))?;
        if body.len() % 2 != 0 {
            return Err(CoreError::parse("bytes", format!("odd hex length {}", body.len())));
        }
        let raw = hex::decode(body).map_err(|e| CoreError::parse("bytes", format!("non-hex character: {e}")))?;
        Ok(Bytes(raw))
    }
}

impl fmt::Display for Bytes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(&self.0))
    }
}

impl fmt::Debug for Bytes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() <= 8 {
            write!(f, "Bytes({self})")
        } else {
            write!(f, "Bytes(0x{}…, {} bytes)", hex::encode(&self.0[..8]), self.0.len())
        }
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let text = String::deserialize(deserializer)?;
                text.parse().map_err(de::Error::custom)
            }
        }
    };
}

string_serde!(Address);
string_serde!(Hash32);
string_serde!(Bytes);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn address_case_folds_to_canonical() {
        let a: Address = "0xABCDEF0000000000000000000000000000000001".parse().unwrap();
        assert_eq!(a.to_string(), "0xabcdef0000000000000000000000000000000001");
    }

    #[test]
    fn zero_address_round_trips() {
        let text = format!("0x{}", "0".repeat(40));
        let a: Address = text.parse().unwrap();
        assert!(a.is_zero());
        assert_eq!(a.to_string(), text);
    }

    #[test]
    fn short_address_is_rejected() {
        let err = "0xabc".parse::<Address>().unwrap_err();
        assert!(err.to_string().contains("expected 40 hex chars, got 3"), "{err}");
    }

    #[test]
    fn non_hex_address_is_rejected() {
        let err = format!("0x{}", "g".repeat(40)).parse::<Address>().unwrap_err();
        assert!(err.to_string().contains("non-hex"));
    }

    #[test]
    fn address_from_word_requires_zero_padding() {
        let mut word = [0u8; 32];
        word[12..].copy_from_slice(&[0x11; 20]);
        assert_eq!(Address::from_word(&word), Some(Address([0x11; 20])));
        word[3] = 1;
        assert_eq!(Address::from_word(&word), None);
    }

    #[test]
    fn bytes_rejects_odd_length() {
        assert!("0xabc".parse::<Bytes>().is_err());
        assert_eq!("0x".parse::<Bytes>().unwrap(), Bytes::new());
    }
}
