//! Best-effort token metadata collection over `eth_call`. Tokens in the
//! wild frequently lack some (or all) of name/symbol/decimals/totalSupply,
//! so every field is optional and every failure degrades to an absent
//! field instead of aborting the build.

use std::collections::BTreeSet;

use xbeth_core::{Address, Amount256};
use xbeth_decode::Selector;
use xbeth_ingest::RpcClient;

use crate::rows::{Erc20TransferRow, TokenMetadataRow};

pub trait TokenMetadataSource {
    fn fetch(&self, token: Address) -> TokenMetadataRow;
}

/// Metadata via read-only calls against an archive-serving endpoint.
pub struct RpcMetadataSource<'a> {
    pub client: &'a RpcClient,
    pub at_block: u64,
}

impl RpcMetadataSource<'_> {
    fn call(&self, token: Address, signature: &str) -> Option<Vec<u8>> {
        let selector = Selector::of(signature);
        self.client.call_contract(token, &selector.0, self.at_block).ok().flatten()
    }
}

impl TokenMetadataSource for RpcMetadataSource<'_> {
    fn fetch(&self, token: Address) -> TokenMetadataRow {
        let name = self.call(token, "name()").and_then(|b| decode_abi_string(&b));
        let symbol = self.call(token, "symbol()").and_then(|b| decode_abi_string(&b));
        let decimals = self
            .call(token, "decimals()")
            .and_then(|b| decode_abi_uint(&b))
            .and_then(|v| v.to_u128())
            .and_then(|v| u32::try_from(v).ok());
        let total_supply = self.call(token, "totalSupply()").and_then(|b| decode_abi_uint(&b));
        TokenMetadataRow { token, name, symbol, decimals, total_supply }
    }
}

/// One metadata row per distinct emitting token address, addresses sorted
/// ascending. Without a source only the addresses are filled in.
pub fn token_metadata_rows(transfers: &[Erc20TransferRow], source: Option<&dyn TokenMetadataSource>) -> Vec<TokenMetadataRow> {
    let tokens: BTreeSet<Address> = transfers.iter().map(|row| row.token).collect();
    tokens
        .into_iter()
        .map(|token| match source {
            Some(source) => source.fetch(token),
            None => TokenMetadataRow::bare(token),
        })
        .collect()
}

/// Decodes a solidity ABI `string` return value: offset word, length word,
/// then UTF-8 bytes.
pub fn decode_abi_string(bytes: &[u8]) -> Option<String> {
    if bytes.len() < 64 {
        return None;
    }
    let offset = word_to_usize(&bytes[..32])?;
    let length_word = bytes.get(offset..offset + 32)?;
    let length = word_to_usize(length_word)?;
    let data = bytes.get(offset + 32..offset + 32 + length)?;
    Some(String::from_utf8_lossy(data).into_owned())
}

/// Decodes a single-word unsigned return value.
pub fn decode_abi_uint(bytes: &[u8]) -> Option<Amount256> {
    let word: &[u8; 32] = bytes.get(..32)?.try_into().ok()?;
    Some(Amount256::from_be_word(word))
}

fn word_to_usize(word: &[u8]) -> Option<usize> {
    if word.len() != 32 || word[..24].iter().any(|b| *b != 0) {
        return None;
    }
    Some(u64::from_be_bytes(word[24..].try_into().unwrap()) as usize)
}

/// ABI-encodes a string the way the fixture endpoint serves it.
pub fn encode_abi_string(text: &str) -> Vec<u8> {
    let bytes = text.as_bytes();
    let mut out = vec![0u8; 64];
    out[31] = 32; // offset of the length word
    out[56..64].copy_from_slice(&(bytes.len() as u64).to_be_bytes());
    out.extend_from_slice(bytes);
    let pad = (32 - bytes.len() % 32) % 32;
    out.extend(std::iter::repeat_n(0u8, pad));
    out
}
