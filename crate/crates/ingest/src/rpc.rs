//! Block-indexed JSON-RPC 2.0 client. Only the four batch-friendly methods
//! the pipeline needs are implemented; receipt access is block-indexed
//! only, since per-hash receipt queries make range extraction quadratic.

use std::time::Duration;

use serde_json::{json, Value};

use xbeth_core::{Address, Bytes, RawBlock, ReceiptRecord, TraceRecord};

use crate::error::IngestError;

/// Exponential backoff schedule for transient transport failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub base_ms: u64,
    pub factor: u32,
    pub max_attempts: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { base_ms: 500, factor: 2, max_attempts: 5 }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32) -> Duration {
        let factor = (self.factor as u64).saturating_pow(attempt.saturating_sub(1));
        Duration::from_millis(self.base_ms.saturating_mul(factor))
    }
}

/// Synchronous JSON-RPC client; cheap to share across fetch workers.
pub struct RpcClient {
    url: String,
    http: reqwest::blocking::Client,
    retry: RetryPolicy,
}

fn hex_quantity(n: u64) -> String {
    format!("0x{n:x}")
}

impl RpcClient {
    pub fn new(url: impl Into<String>) -> RpcClient {
        RpcClient::with_retry(url, RetryPolicy::default())
    }

    pub fn with_retry(url: impl Into<String>, retry: RetryPolicy) -> RpcClient {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .build()
            .expect("static client configuration");
        RpcClient { url: url.into(), http, retry }
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    fn call(&self, method: &'static str, params: Value) -> Result<Value, IngestError> {
        let request = json!({
            "jsonrpc": "2.0",
            "id": 1,
            "method": method,
            "params": params,
        });
        let mut attempt = 0u32;
        loop {
            attempt += 1;
            let failure = match self.http.post(&self.url).json(&request).send() {
                Ok(response) if response.status().is_success() => {
                    let body: Value = response.json().map_err(|e| IngestError::BadResponse {
                        method,
                        reason: format!("invalid JSON body: {e}"),
                    })?;
                    if let Some(err) = body.get("error").filter(|e| !e.is_null()) {
                        return Err(IngestError::Rpc {
                            method,
                            code: err.get("code").and_then(Value::as_i64).unwrap_or(0),
                            message: err.get("message").and_then(Value::as_str).unwrap_or("").to_string(),
                        });
                    }
                    let mut body = body;
                    return Ok(body.get_mut("result").map(Value::take).unwrap_or(Value::Null));
                }
                Ok(response) => format!("http status {}", response.status()),
                Err(e) => e.to_string(),
            };
            if attempt >= self.retry.max_attempts {
                return Err(IngestError::Transport { url: self.url.clone(), attempts: attempt, reason: failure });
            }
            std::thread::sleep(self.retry.delay(attempt));
        }
    }

    /// `eth_getBlockByNumber` with full transaction objects.
    pub fn fetch_block(&self, height: u64) -> Result<RawBlock, IngestError> {
        let result = self.call("eth_getBlockByNumber", json!([hex_quantity(height), true]))?;
        if result.is_null() {
            return Err(IngestError::NotFound { height });
        }
        serde_json::from_value(result).map_err(|e| IngestError::BadResponse {
            method: "eth_getBlockByNumber",
            reason: e.to_string(),
        })
    }

    /// `parity_getBlockReceipts`: all receipts of a block in one query.
    pub fn fetch_receipts(&self, height: u64) -> Result<Vec<ReceiptRecord>, IngestError> {
        let result = self.call("parity_getBlockReceipts", json!([hex_quantity(height)]))?;
        if result.is_null() {
            return Err(IngestError::NotFound { height });
        }
        serde_json::from_value(result).map_err(|e| IngestError::BadResponse {
            method: "parity_getBlockReceipts",
            reason: e.to_string(),
        })
    }

    /// `trace_block`: every execution trace of a block, rewards included.
    pub fn fetch_traces(&self, height: u64) -> Result<Vec<TraceRecord>, IngestError> {
        let result = self.call("trace_block", json!([hex_quantity(height)]))?;
        if result.is_null() {
            return Err(IngestError::NotFound { height });
        }
        serde_json::from_value(result).map_err(|e| IngestError::BadResponse {
            method: "trace_block",
            reason: e.to_string(),
        })
    }

    /// Read-only `eth_call`, used for token metadata. Reverts and calls to
    /// non-contract addresses are a normal outcome (`None`), not failures:
    /// tokens in the wild routinely lack metadata fields.
    pub fn call_contract(&self, contract: Address, calldata: &[u8], at_block: u64) -> Result<Option<Vec<u8>>, IngestError> {
        let params = json!([
            {"to": contract.to_string(), "data": Bytes(calldata.to_vec()).to_string()},
            hex_quantity(at_block),
        ]);
        match self.call("eth_call", params) {
            Ok(Value::Null) => Ok(None),
            Ok(Value::String(text)) => {
                let bytes: Bytes = text.parse().map_err(|e| IngestError::BadResponse {
                    method: "eth_call",
                    reason: format!("{e}"),
                })?;
                Ok(Some(bytes.0))
            }
            Ok(other) => Err(IngestError::BadResponse { method: "eth_call", reason: format!("unexpected result {other}") }),
            Err(IngestError::Rpc { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}
