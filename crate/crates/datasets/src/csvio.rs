//! CSV encode/decode for dataset files: UTF-8, header row, RFC 4180
//! quoting, optional gzip.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;

use crate::error::DatasetError;

pub const FILE_D1_BLOCKS: &str = "dataset1_blocks.csv";
pub const FILE_D1_TXS: &str = "dataset1_txs.csv";
pub const FILE_D2_INTERNAL: &str = "dataset2_internal_eth.csv";
pub const FILE_D3_CONTRACTS: &str = "dataset3_contracts.csv";
pub const FILE_D4_CALLS: &str = "dataset4_calls.csv";
pub const FILE_D5_ERC20: &str = "dataset5_erc20.csv";
pub const FILE_D5_TOKENS: &str = "dataset5_tokens.csv";
pub const FILE_D6_ERC721: &str = "dataset6_erc721.csv";

pub const ALL_DATASET_FILES: [&str; 8] = [
    FILE_D1_BLOCKS,
    FILE_D1_TXS,
    FILE_D2_INTERNAL,
    FILE_D3_CONTRACTS,
    FILE_D4_CALLS,
    FILE_D5_ERC20,
    FILE_D5_TOKENS,
    FILE_D6_ERC721,
];

pub fn dataset_path(dir: &Path, file_name: &str, gzip: bool) -> PathBuf {
    if gzip {
        dir.join(format!("{file_name}.gz"))
    } else {
        dir.join(file_name)
    }
}

/// Finds the plain or gzipped variant of a dataset file.
pub fn find_dataset_file(dir: &Path, file_name: &str) -> Option<PathBuf> {
    for gz in [false, true] {
        let path = dataset_path(dir, file_name, gz);
        if path.is_file() {
            return Some(path);
        }
    }
    None
}

/// Writes a dataset CSV and returns the number of data rows.
pub fn write_records<I>(dir: &Path, file_name: &str, header: &[&str], records: I, gzip: bool) -> Result<u64, DatasetError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir.display(), e))?;
    let path = dataset_path(dir, file_name, gzip);
    let file = fs::File::create(&path).map_err(|e| DatasetError::io(path.display(), e))?;
    let sink: Box<dyn Write> = if gzip {
        Box::new(GzEncoder::new(BufWriter::new(file), flate2::Compression::default()))
    } else {
        Box::new(BufWriter::new(file))
    };
    let mut writer = csv::Writer::from_writer(sink);
    writer
        .write_record(header)
        .map_err(|e| DatasetError::Csv { file: file_name.to_string(), reason: e.to_string() })?;
    let mut rows = 0u64;
    for record in records {
        writer
            .write_record(&record)
            .map_err(|e| DatasetError::Csv { file: file_name.to_string(), reason: e.to_string() })?;
        rows += 1;
    }
    writer
        .flush()
        .map_err(|e| DatasetError::io(path.display(), e))?;
    Ok(rows)
}

fn open_reader(path: &Path) -> Result<Box<dyn Read>, DatasetError> {
    let file = fs::File::open(path).map_err(|e| DatasetError::io(path.display(), e))?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Reads header and raw cell rows back from a dataset CSV.
pub fn read_records(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), DatasetError> {
    let file_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(open_reader(path)?);
    let header = reader
        .headers()
        .map_err(|e| DatasetError::Csv { file: file_name.clone(), reason: e.to_string() })?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DatasetError::Csv { file: file_name.clone(), reason: e.to_string() })?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

/// Reads and parses a dataset CSV into typed rows.
pub fn read_rows<T>(path: &Path, parse: impl Fn(&[String]) -> Result<T, String>) -> Result<Vec<T>, DatasetError> {
    let file_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let (_, records) = read_records(path)?;
    records
        .iter()
        .enumerate()
        .map(|(i, rec)| parse(rec).map_err(|reason| crate::rows::record_error(&file_name, i + 2, reason)))
        .collect()
}
