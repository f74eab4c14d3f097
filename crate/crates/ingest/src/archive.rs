//! The raw archive: one file per 10,000-block segment, named
//! `raw-<from>-<to>.jsonl` (or `.jsonl.gz`), each line one `BlockBundle`
//! as a single JSON object, lines sorted by height.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;

use crate::bundle::BlockBundle;
use crate::error::IngestError;

/// Heights covered by one archive file.
pub const SEGMENT_SPAN: u64 = 10_000;

/// Start and end (inclusive) of the segment containing `height`.
pub fn segment_bounds(height: u64) -> (u64, u64) {
    let from = height / SEGMENT_SPAN * SEGMENT_SPAN;
    (from, from + SEGMENT_SPAN - 1)
}

fn segment_file_name(seg_from: u64, seg_to: u64, gzip: bool) -> String {
    if gzip {
        format!("raw-{seg_from}-{seg_to}.jsonl.gz")
    } else {
        format!("raw-{seg_from}-{seg_to}.jsonl")
    }
}

/// Resolves the on-disk file for a segment, preferring the plain form when
/// both exist.
pub fn find_segment_file(dir: &Path, seg_from: u64) -> Option<PathBuf> {
    let (from, to) = segment_bounds(seg_from);
    for gz in [false, true] {
        let path = dir.join(segment_file_name(from, to, gz));
        if path.is_file() {
            return Some(path);
        }
    }
    None
}

fn open_segment(path: &Path) -> Result<Box<dyn BufRead>, IngestError> {
    let file = fs::File::open(path).map_err(|e| IngestError::io(path.display().to_string(), e))?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Loads every bundle of one segment file keyed by height, validating each.
pub fn read_segment(path: &Path) -> Result<BTreeMap<u64, BlockBundle>, IngestError> {
    let reader = open_segment(path)?;
    let mut out = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IngestError::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let bundle: BlockBundle = serde_json::from_str(&line).map_err(|e| IngestError::CorruptLine {
            path: path.display().to_string(),
            reason: format!("line {}: {e}", idx + 1),
        })?;
        bundle.validate()?;
        if out.insert(bundle.height(), bundle).is_some() {
            return Err(IngestError::CorruptLine {
                path: path.display().to_string(),
                reason: format!("line {}: duplicate height", idx + 1),
            });
        }
    }
    Ok(out)
}

/// Writes one complete segment atomically: the content goes to a temp name
/// first and is renamed into place, so a crashed run never leaves a
/// truncated record under the archive name.
pub fn write_segment(dir: &Path, seg_from: u64, bundles: &BTreeMap<u64, BlockBundle>, gzip: bool) -> Result<PathBuf, IngestError> {
    let (from, to) = segment_bounds(seg_from);
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir.display().to_string(), e))?;
    let final_path = dir.join(segment_file_name(from, to, gzip));
    let tmp_path = dir.join(format!(".{}.tmp", segment_file_name(from, to, gzip)));

    {
        let file = fs::File::create(&tmp_path).map_err(|e| IngestError::io(tmp_path.display().to_string(), e))?;
        let mut writer: Box<dyn Write> = if gzip {
            Box::new(BufWriter::new(GzEncoder::new(file, flate2::Compression::default())))
        } else {
            Box::new(BufWriter::new(file))
        };
        for bundle in bundles.values() {
            serde_json::to_writer(&mut writer, bundle).map_err(|e| IngestError::CorruptLine {
                path: tmp_path.display().to_string(),
                reason: e.to_string(),
            })?;
            writer.write_all(b"\n").map_err(|e| IngestError::io(tmp_path.display().to_string(), e))?;
        }
        writer.flush().map_err(|e| IngestError::io(tmp_path.display().to_string(), e))?;
    }
    fs::rename(&tmp_path, &final_path).map_err(|e| IngestError::io(final_path.display().to_string(), e))?;
    Ok(final_path)
}

/// Writes bundles (already in increasing height order) into their segment
/// files. Used by the fixture generator and by tests.
pub fn write_archive<I>(dir: &Path, bundles: I, gzip: bool) -> Result<u64, IngestError>
where
    I: IntoIterator<Item = BlockBundle>,
{
    let mut count = 0u64;
    let mut current: BTreeMap<u64, BlockBundle> = BTreeMap::new();
    let mut current_seg: Option<u64> = None;
    for bundle in bundles {
        let (seg_from, _) = segment_bounds(bundle.height());
        if current_seg.is_some_and(|s| s != seg_from) {
            write_segment(dir, current_seg.unwrap(), &current, gzip)?;
            current.clear();
        }
        current_seg = Some(seg_from);
        current.insert(bundle.height(), bundle);
        count += 1;
    }
    if let Some(seg) = current_seg {
        write_segment(dir, seg, &current, gzip)?;
    }
    Ok(count)
}

/// Streaming reader over `[from, to]`, yielding bundles in strictly
/// increasing height order and validating invariants on the way. A gap in
/// the range surfaces as `MissingBlock` naming the first missing height.
pub struct ArchiveReader {
    dir: PathBuf,
    next: u64,
    to: u64,
    segment: std::collections::btree_map::IntoIter<u64, BlockBundle>,
    exhausted: bool,
}

impl ArchiveReader {
    pub fn new(dir: &Path, from: u64, to: u64) -> Result<ArchiveReader, IngestError> {
        if from > to {
            return Err(IngestError::InvalidRange { from, to });
        }
        Ok(ArchiveReader {
            dir: dir.to_path_buf(),
            next: from,
            to,
            segment: BTreeMap::new().into_iter(),
            exhausted: false,
        })
    }

    fn advance(&mut self) -> Result<Option<BlockBundle>, IngestError> {
        loop {
            if self.next > self.to {
                return Ok(None);
            }
            match self.segment.next() {
                Some((height, bundle)) => {
                    if height < self.next {
                        continue; // below the requested range
                    }
                    if height > self.to {
                        return Ok(None);
                    }
                    if height != self.next {
                        return Err(IngestError::MissingBlock { height: self.next });
                    }
                    self.next += 1;
                    return Ok(Some(bundle));
                }
                None => {
                    let path = find_segment_file(&self.dir, self.next)
                        .ok_or(IngestError::MissingBlock { height: self.next })?;
                    let loaded = read_segment(&path)?;
                    if loaded.is_empty() {
                        return Err(IngestError::MissingBlock { height: self.next });
                    }
                    self.segment = loaded.into_iter();
                }
            }
        }
    }
}

impl Iterator for ArchiveReader {
    type Item = Result<BlockBundle, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted {
            return None;
        }
        match self.advance() {
            Ok(Some(bundle)) => Some(Ok(bundle)),
            Ok(None) => {
                self.exhausted = true;
                None
            }
            Err(e) => {
                self.exhausted = true;
                Some(Err(e))
            }
        }
    }
}

/// Convenience wrapper returning the validated bundle stream for a range.
pub fn read_raw(dir: &Path, from: u64, to: u64) -> Result<ArchiveReader, IngestError> {
    ArchiveReader::new(dir, from, to)
}

/// Heights already present (parseable or not, by line count alone a file
/// could lie, so this parses) in the segment holding `seg_from`.
pub fn existing_heights(dir: &Path, seg_from: u64) -> Result<BTreeMap<u64, BlockBundle>, IngestError> {
    match find_segment_file(dir, seg_from) {
        Some(path) => read_segment(&path),
        None => Ok(BTreeMap::new()),
    }
}

/// Reads a whole file for digesting; used by tests and the manifest.
pub fn read_file_bytes(path: &Path) -> Result<Vec<u8>, IngestError> {
    let mut buf = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| IngestError::io(path.display().to_string(), e))?;
    Ok(buf)
}
