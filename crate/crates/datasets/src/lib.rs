//! Transforms streams of block bundles into the six analysis datasets,
//! with deterministic ordering and join-complete rows.
//!
//! Every dataset is sorted by (block number, transaction index, trace
//! address, log index) as applicable; identical raw archives produce
//! byte-identical dataset files regardless of worker count.

mod build;
mod csvio;
mod error;
mod metadata;
mod rows;

pub use build::{
    build_dataset1, build_dataset2, build_dataset3, build_dataset4, build_dataset5, build_dataset6,
    join_contract_rows, BuildOutput, ContractEvent, CreateEvent, DatasetBuilder, DatasetSelection, SkipReport,
    SuicideEvent,
};
pub use csvio::{
    dataset_path, find_dataset_file, read_records, read_rows, write_records, ALL_DATASET_FILES, FILE_D1_BLOCKS,
    FILE_D1_TXS, FILE_D2_INTERNAL, FILE_D3_CONTRACTS, FILE_D4_CALLS, FILE_D5_ERC20, FILE_D5_TOKENS, FILE_D6_ERC721,
};
pub use error::DatasetError;
pub use metadata::{
    decode_abi_string, decode_abi_uint, encode_abi_string, token_metadata_rows, RpcMetadataSource,
    TokenMetadataSource,
};
pub use rows::{
    decode_trace_address, encode_trace_address, BlockRow, ContractCallRow, ContractInfoRow, Erc20TransferRow,
    Erc721TransferRow, InternalEtherTxRow, InternalKind, TokenMetadataRow, TxRow, BLOCKS_HEADER, CALLS_HEADER,
    CONTRACTS_HEADER, ERC20_HEADER, ERC721_HEADER, INTERNAL_HEADER, TOKENS_HEADER, TXS_HEADER,
};
