use std::sync::OnceLock;

use xbeth_core::Hash32;

use crate::keccak::keccak256;
use crate::DecodeError;

/// First 4 bytes of call input; the compiled entry point of a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selector(pub [u8; 4]);

impl Selector {
    /// Selector for a canonical function signature such as
    /// `transfer(address,uint256)`.
    pub fn of(signature: &str) -> Selector {
        let digest = keccak256(signature.as_bytes());
        Selector([digest[0], digest[1], digest[2], digest[3]])
    }
}

impl std::fmt::Display for Selector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0x{:02x}{:02x}{:02x}{:02x}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl std::str::FromStr for Selector {
    type Err = xbeth_core::CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix("0x")
            .ok_or_else(|| xbeth_core::CoreError::parse("selector", "missing 0x prefix"))?;
        let mut out = [0u8; 4];
        if body.len() != 8 {
            return Err(xbeth_core::CoreError::parse("selector", format!("expected 8 hex chars, got {}", body.len())));
        }
        hex::decode_to_slice(body, &mut out)
            .map_err(|e| xbeth_core::CoreError::parse("selector", format!("non-hex character: {e}")))?;
        Ok(Selector(out))
    }
}

/// Extracts the function selector when the input can carry one: the first
/// 4 bytes of inputs at least 4 bytes long. Shorter inputs (plain value
/// transfers, stub fallback data) have no selector.
pub fn extract_selector(input: &[u8]) -> Option<Selector> {
    if input.len() < 4 {
        return None;
    }
    Some(Selector([input[0], input[1], input[2], input[3]]))
}

/// Topic word of a canonical event signature, e.g.
/// `Transfer(address,address,uint256)`.
///
/// Signatures must already be canonical: embedded whitespace is rejected
/// rather than stripped, since canonicalization is the caller's job.
pub fn event_topic(signature: &str) -> Result<Hash32, DecodeError> {
    if signature.chars().any(char::is_whitespace) {
        return Err(DecodeError::WhitespaceInSignature(signature.to_string()));
    }
    Ok(Hash32(keccak256(signature.as_bytes())))
}

/// Topic of `Transfer(from,to,value)`, shared by the ERC20 and ERC721
/// protocols.
pub fn transfer_topic() -> Hash32 {
    static TOPIC: OnceLock<Hash32> = OnceLock::new();
    *TOPIC.get_or_init(|| event_topic("Transfer(address,address,uint256)").expect("canonical signature"))
}
