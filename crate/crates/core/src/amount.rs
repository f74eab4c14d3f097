use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoreError;

fn limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| BigUint::from(1u8) << 256u32)
}

/// Unsigned 256-bit integer. Unit is wei for Ether amounts, unit-free for
/// token values.
///
/// Never negative; any operation that would exceed `2^256 - 1` is a hard
/// error. The text form is a decimal digit string with no leading zeros.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Amount256(BigUint);

impl Amount256 {
    pub fn zero() -> Amount256 {
        Amount256(BigUint::from(0u8))
    }

    pub fn max_value() -> Amount256 {
        Amount256(limit() - 1u8)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == BigUint::from(0u8)
    }

    pub fn checked_add(&self, other: &Amount256) -> Result<Amount256, CoreError> {
        let sum = &self.0 + &other.0;
        if &sum >= limit() {
            return Err(CoreError::AmountOverflow);
        }
        Ok(Amount256(sum))
    }

    pub fn checked_sub(&self, other: &Amount256) -> Result<Amount256, CoreError> {
        if other.0 > self.0 {
            return Err(CoreError::AmountUnderflow);
        }
        Ok(Amount256(&self.0 - &other.0))
    }

    pub fn checked_mul(&self, other: &Amount256) -> Result<Amount256, CoreError> {
        let product = &self.0 * &other.0;
        if &product >= limit() {
            return Err(CoreError::AmountOverflow);
        }
        Ok(Amount256(product))
    }

    /// Big-endian 32-byte form, as used in log topics and ABI words.
    pub fn from_be_word(word: &[u8; 32]) -> Amount256 {
        Amount256(BigUint::from_bytes_be(word))
    }

    pub fn to_be_word(&self) -> [u8; 32] {
        let raw = self.0.to_bytes_be();
        let mut out = [0u8; 32];
        out[32 - raw.len()..].copy_from_slice(&raw);
        out
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// Lossy conversion for values known to fit; used only in tests and
    /// fixture bookkeeping where the range is controlled.
    pub fn to_u128(&self) -> Option<u128> {
        let bytes = self.0.to_bytes_be();
        if bytes.len() > 16 {
            return None;
        }
        let mut buf = [0u8; 16];
        buf[16 - bytes.len()..].copy_from_slice(&bytes);
        Some(u128::from_be_bytes(buf))
    }
}

impl From<u64> for Amount256 {
    fn from(v: u64) -> Amount256 {
        Amount256(BigUint::from(v))
    }
}

impl From<u128> for Amount256 {
    fn from(v: u128) -> Amount256 {
        Amount256(BigUint::from(v))
    }
}

impl FromStr for Amount256 {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CoreError::parse("amount", format!("not a decimal digit string: {s:?}")));
        }
        if s.len() > 1 && s.starts_with('0') {
            return Err(CoreError::parse("amount", format!("leading zeros: {s:?}")));
        }
        let value = BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| CoreError::parse("amount", format!("unparseable: {s:?}")))?;
        if &value >= limit() {
            return Err(CoreError::AmountOverflow);
        }
        Ok(Amount256(value))
    }
}

impl fmt::Display for Amount256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Amount256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Amount256({})", self.0)
    }
}

impl Serialize for Amount256 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Amount256 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}
