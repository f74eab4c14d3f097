//! Loopback JSON-RPC serving mode: answers the four wire methods from a
//! generated archive and its ledger, so the live-RPC extraction path can
//! be exercised without any public endpoint.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;

use axum::extract::State;
use axum::routing::post;
use axum::{Json, Router};
use serde_json::{json, Value};
use tokio::sync::oneshot;

use xbeth_core::{Address, Amount256, Bytes};
use xbeth_datasets::encode_abi_string;
use xbeth_ingest::BlockBundle;

use crate::ledger::TokenInfo;
use crate::FixtureError;

// selectors of the metadata getters answered by eth_call
const SEL_NAME: [u8; 4] = [0x06, 0xfd, 0xde, 0x03];
const SEL_SYMBOL: [u8; 4] = [0x95, 0xd8, 0x9b, 0x41];
const SEL_DECIMALS: [u8; 4] = [0x31, 0x3c, 0xe5, 0x67];
const SEL_TOTAL_SUPPLY: [u8; 4] = [0x18, 0x16, 0x0d, 0xdd];

struct ServerState {
    bundles: HashMap<u64, BlockBundle>,
    tokens: BTreeMap<Address, TokenInfo>,
}

/// A running fixture endpoint; dropping it shuts the server down.
pub struct FixtureServer {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<()>>,
}

impl FixtureServer {
    /// Binds `127.0.0.1:port` (0 picks an ephemeral port) and serves the
    /// given chain. All served state is read-only.
    pub fn start(
        bundles: Vec<BlockBundle>,
        tokens: BTreeMap<Address, TokenInfo>,
        port: u16,
    ) -> Result<FixtureServer, FixtureError> {
        let state = Arc::new(ServerState {
            bundles: bundles.into_iter().map(|b| (b.height(), b)).collect(),
            tokens,
        });
        let (addr_tx, addr_rx) = std::sync::mpsc::channel();
        let (shutdown_tx, shutdown_rx) = oneshot::channel::<()>();

        let thread = std::thread::spawn(move || {
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .worker_threads(2)
                .enable_all()
                .build()
                .expect("tokio runtime");
            runtime.block_on(async move {
                let app = Router::new().route("/", post(handle_rpc)).with_state(state);
                let listener = match tokio::net::TcpListener::bind(("127.0.0.1", port)).await {
                    Ok(l) => l,
                    Err(e) => {
                        let _ = addr_tx.send(Err(e.to_string()));
                        return;
                    }
                };
                let addr = listener.local_addr().expect("bound socket has an address");
                let _ = addr_tx.send(Ok(addr));
                axum::serve(listener, app)
                    .with_graceful_shutdown(async move {
                        let _ = shutdown_rx.await;
                    })
                    .await
                    .expect("serve loop");
            });
        });

        let addr = addr_rx
            .recv()
            .map_err(|_| FixtureError::Serve("server thread died before binding".to_string()))?
            .map_err(FixtureError::Serve)?;
        Ok(FixtureServer { addr, shutdown: Some(shutdown_tx), thread: Some(thread) })
    }

    pub fn url(&self) -> String {
        format!("http://{}/", self.addr)
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }
}

impl Drop for FixtureServer {
    fn drop(&mut self) {
        if let Some(shutdown) = self.shutdown.take() {
            let _ = shutdown.send(());
        }
        if let Some(thread) = self.thread.take() {
            let _ = thread.join();
        }
    }
}

fn rpc_error(id: Value, code: i64, message: &str) -> Json<Value> {
    Json(json!({"jsonrpc": "2.0", "id": id, "error": {"code": code, "message": message}}))
}

fn rpc_result(id: Value, result: Value) -> Json<Value> {
    Json(json!({"jsonrpc": "2.0", "id": id, "result": result}))
}

fn parse_quantity(value: Option<&Value>) -> Option<u64> {
    let text = value?.as_str()?;
    u64::from_str_radix(text.strip_prefix("0x")?, 16).ok()
}

async fn handle_rpc(State(state): State<Arc<ServerState>>, Json(request): Json<Value>) -> Json<Value> {
    let id = request.get("id").cloned().unwrap_or(Value::Null);
    let method = request.get("method").and_then(Value::as_str).unwrap_or("");
    let params = request.get("params").and_then(Value::as_array).cloned().unwrap_or_default();

    match method {
        "eth_getBlockByNumber" => match parse_quantity(params.first()) {
            Some(height) => match state.bundles.get(&height) {
                Some(bundle) => rpc_result(id, serde_json::to_value(&bundle.block).expect("serializable")),
                None => rpc_result(id, Value::Null),
            },
            None => rpc_error(id, -32602, "expected a hex block number"),
        },
        "parity_getBlockReceipts" => match parse_quantity(params.first()) {
            Some(height) => match state.bundles.get(&height) {
                Some(bundle) => rpc_result(id, serde_json::to_value(&bundle.receipts).expect("serializable")),
                None => rpc_result(id, Value::Null),
            },
            None => rpc_error(id, -32602, "expected a hex block number"),
        },
        "trace_block" => match parse_quantity(params.first()) {
            Some(height) => match state.bundles.get(&height) {
                Some(bundle) => rpc_result(id, serde_json::to_value(&bundle.traces).expect("serializable")),
                None => rpc_result(id, Value::Null),
            },
            None => rpc_error(id, -32602, "expected a hex block number"),
        },
        "eth_call" => handle_eth_call(&state, id, &params),
        _ => rpc_error(id, -32601, "method not found"),
    }
}

fn handle_eth_call(state: &ServerState, id: Value, params: &[Value]) -> Json<Value> {
    let Some(call) = params.first().and_then(Value::as_object) else {
        return rpc_error(id, -32602, "expected a call object");
    };
    let to: Option<Address> = call.get("to").and_then(Value::as_str).and_then(|s| s.parse().ok());
    let data: Option<Bytes> = call.get("data").and_then(Value::as_str).and_then(|s| s.parse().ok());
    let (Some(to), Some(data)) = (to, data) else {
        return rpc_error(id, -32602, "call object needs to and data");
    };

    let Some(token) = state.tokens.get(&to) else {
        return rpc_error(id, -32000, "execution reverted: not a contract");
    };
    let selector: Option<[u8; 4]> = data.as_slice().get(..4).and_then(|s| s.try_into().ok());
    let answer: Option<Vec<u8>> = match selector {
        Some(SEL_NAME) => token.name.as_deref().map(encode_abi_string),
        Some(SEL_SYMBOL) => token.symbol.as_deref().map(encode_abi_string),
        Some(SEL_DECIMALS) => token.decimals.map(|d| Amount256::from(d as u64).to_be_word().to_vec()),
        Some(SEL_TOTAL_SUPPLY) => token.total_supply.as_ref().map(|s| s.to_be_word().to_vec()),
        _ => None,
    };
    match answer {
        Some(bytes) => rpc_result(id, Value::String(Bytes(bytes).to_string())),
        None => rpc_error(id, -32000, "execution reverted"),
    }
}
