use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoreError;
use crate::{Address, Amount256, Bytes, Hash32};

/// Sub-kind of a Call trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallKind {
    Call,
    DelegateCall,
    StaticCall,
    CallCode,
}

impl CallKind {
    pub const ALL: [CallKind; 4] = [CallKind::Call, CallKind::DelegateCall, CallKind::StaticCall, CallKind::CallCode];

    pub fn as_str(&self) -> &'static str {
        match self {
            CallKind::Call => "call",
            CallKind::DelegateCall => "delegatecall",
            CallKind::StaticCall => "staticcall",
            CallKind::CallCode => "callcode",
        }
    }
}

/// Whether a reward pays a mined block or an uncle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardKind {
    Block,
    Uncle,
}

/// Deployment of a contract, with the outcome fields present on success.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CreateTrace {
    pub from: Address,
    /// Endowment moved into the new contract.
    pub value: Amount256,
    pub init_code: Bytes,
    pub result_address: Option<Address>,
    pub deployed_code: Option<Bytes>,
    pub gas_used: u64,
}

/// Message call or plain value transfer between two addresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallTrace {
    pub call_type: CallKind,
    pub from: Address,
    pub to: Address,
    pub value: Amount256,
    pub input: Bytes,
    pub gas_used: u64,
    pub output: Bytes,
}

/// Contract deletion refunding the remaining balance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuicideTrace {
    pub address: Address,
    pub refund_address: Address,
    pub balance: Amount256,
}

/// Ether minted to a miner for a block or uncle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardTrace {
    pub author: Address,
    pub value: Amount256,
    pub reward_type: RewardKind,
}

/// The variant payload of a trace; exactly one is present per record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceAction {
    Create(CreateTrace),
    Call(CallTrace),
    Suicide(SuicideTrace),
    Reward(RewardTrace),
}

impl TraceAction {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TraceAction::Create(_) => "create",
            TraceAction::Call(_) => "call",
            TraceAction::Suicide(_) => "suicide",
            TraceAction::Reward(_) => "reward",
        }
    }

    pub fn as_call(&self) -> Option<&CallTrace> {
        match self {
            TraceAction::Call(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_create(&self) -> Option<&CreateTrace> {
        match self {
            TraceAction::Create(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_suicide(&self) -> Option<&SuicideTrace> {
        match self {
            TraceAction::Suicide(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_reward(&self) -> Option<&RewardTrace> {
        match self {
            TraceAction::Reward(r) => Some(r),
            _ => None,
        }
    }
}

/// Run-time execution record of one frame within a transaction, or a
/// block/uncle reward.
///
/// A trace with non-empty `trace_address` has a parent trace with the same
/// `tx_hash` whose `trace_address` is its prefix. Reward traces carry no
/// `tx_hash` and an empty `trace_address`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub block_number: u64,
    /// Absent for reward traces.
    pub tx_hash: Option<Hash32>,
    /// Path of child indices from the root frame; empty = top level.
    pub trace_address: Vec<u32>,
    /// Client-reported failure label, normalized only at stats time.
    pub error: Option<String>,
    pub action: TraceAction,
}

impl TraceRecord {
    pub fn is_top_level(&self) -> bool {
        self.trace_address.is_empty()
    }

    pub fn has_error(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindTag {
    Create,
    Call,
    Suicide,
    Reward,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ActionWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    call_type: Option<CallKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    from: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Amount256>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input: Option<Bytes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    init: Option<Bytes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    address: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    refund_address: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    balance: Option<Amount256>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    author: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reward_type: Option<RewardKind>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ResultWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    address: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    code: Option<Bytes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gas_used: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output: Option<Bytes>,
}

/// Parity-style trace JSON: action/result split plus a `type` tag.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct TraceWire {
    action: ActionWire,
    block_number: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    result: Option<ResultWire>,
    trace_address: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transaction_hash: Option<Hash32>,
    #[serde(rename = "type")]
    kind: KindTag,
}

fn missing(field: &'static str) -> CoreError {
    CoreError::parse("trace", format!("missing field {field} for its trace type"))
}

impl From<&TraceRecord> for TraceWire {
    fn from(t: &TraceRecord) -> TraceWire {
        let (kind, action, result) = match &t.action {
            TraceAction::Create(c) => (
                KindTag::Create,
                ActionWire {
                    from: Some(c.from),
                    value: Some(c.value.clone()),
                    init: Some(c.init_code.clone()),
                    ..ActionWire::default()
                },
                Some(ResultWire {
                    address: c.result_address,
                    code: c.deployed_code.clone(),
                    gas_used: Some(c.gas_used),
                    ..ResultWire::default()
                }),
            ),
            TraceAction::Call(c) => (
                KindTag::Call,
                ActionWire {
                    call_type: Some(c.call_type),
                    from: Some(c.from),
                    to: Some(c.to),
                    value: Some(c.value.clone()),
                    input: Some(c.input.clone()),
                    ..ActionWire::default()
                },
                Some(ResultWire {
                    gas_used: Some(c.gas_used),
                    output: Some(c.output.clone()),
                    ..ResultWire::default()
                }),
            ),
            TraceAction::Suicide(s) => (
                KindTag::Suicide,
                ActionWire {
                    address: Some(s.address),
                    refund_address: Some(s.refund_address),
                    balance: Some(s.balance.clone()),
                    ..ActionWire::default()
                },
                None,
            ),
            TraceAction::Reward(r) => (
                KindTag::Reward,
                ActionWire {
                    author: Some(r.author),
                    value: Some(r.value.clone()),
                    reward_type: Some(r.reward_type),
                    ..ActionWire::default()
                },
                None,
            ),
        };
        TraceWire {
            action,
            block_number: t.block_number,
            error: t.error.clone(),
            result,
            trace_address: t.trace_address.clone(),
            transaction_hash: t.tx_hash,
            kind,
        }
    }
}

impl TryFrom<TraceWire> for TraceRecord {
    type Error = CoreError;

    fn try_from(w: TraceWire) -> Result<TraceRecord, CoreError> {
        let a = w.action;
        let r = w.result.unwrap_or_default();
        let action = match w.kind {
            KindTag::Create => TraceAction::Create(CreateTrace {
                from: a.from.ok_or_else(|| missing("action.from"))?,
                value: a.value.ok_or_else(|| missing("action.value"))?,
                init_code: a.init.ok_or_else(|| missing("action.init"))?,
                result_address: r.address,
                deployed_code: r.code,
                gas_used: r.gas_used.ok_or_else(|| missing("result.gasUsed"))?,
            }),
            KindTag::Call => TraceAction::Call(CallTrace {
                call_type: a.call_type.ok_or_else(|| missing("action.callType"))?,
                from: a.from.ok_or_else(|| missing("action.from"))?,
                to: a.to.ok_or_else(|| missing("action.to"))?,
                value: a.value.ok_or_else(|| missing("action.value"))?,
                input: a.input.ok_or_else(|| missing("action.input"))?,
                gas_used: r.gas_used.ok_or_else(|| missing("result.gasUsed"))?,
                output: r.output.ok_or_else(|| missing("result.output"))?,
            }),
            KindTag::Suicide => TraceAction::Suicide(SuicideTrace {
                address: a.address.ok_or_else(|| missing("action.address"))?,
                refund_address: a.refund_address.ok_or_else(|| missing("action.refundAddress"))?,
                balance: a.balance.ok_or_else(|| missing("action.balance"))?,
            }),
            KindTag::Reward => TraceAction::Reward(RewardTrace {
                author: a.author.ok_or_else(|| missing("action.author"))?,
                value: a.value.ok_or_else(|| missing("action.value"))?,
                reward_type: a.reward_type.ok_or_else(|| missing("action.rewardType"))?,
            }),
        };
        let record = TraceRecord {
            block_number: w.block_number,
            tx_hash: w.transaction_hash,
            trace_address: w.trace_address,
            error: w.error,
            action,
        };
        if matches!(record.action, TraceAction::Reward(_)) {
            if record.tx_hash.is_some() {
                return Err(CoreError::parse("trace", "reward trace must not carry a transactionHash"));
            }
            if !record.trace_address.is_empty() {
                return Err(CoreError::parse("trace", "reward trace must have an empty traceAddress"));
            }
        } else if record.tx_hash.is_none() {
            return Err(missing("transactionHash"));
        }
        Ok(record)
    }
}

impl Serialize for TraceRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TraceWire::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TraceRecord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = TraceWire::deserialize(deserializer)?;
        TraceRecord::try_from(wire).map_err(serde::de::Error::custom)
    }
}
