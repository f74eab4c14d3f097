//! Shared report taxonomy: interval bucketing, histogram bucket labels,
//! error-label normalization, and ranking order. Both the statistics
//! engine and the fixture ledger derive their outputs through these rules,
//! so each is pinned by an explicit test.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;

use xbeth_core::Amount256;

/// Interval width used by every `per 10,000 blocks` series.
pub const INTERVAL_BLOCKS: u64 = 10_000;

/// Start of the fixed-width interval containing `block`, aligned to
/// multiples of the interval width.
pub fn interval_start(block: u64) -> u64 {
    block / INTERVAL_BLOCKS * INTERVAL_BLOCKS
}

/// Decade exponent range of the Ether value histogram: buckets
/// `[10^k, 10^(k+1))` Ether for k in `[-6, 7]`, plus underflow/overflow.
pub const ETHER_DECADE_MIN: i32 = -6;
pub const ETHER_DECADE_MAX: i32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtherBucket {
    Underflow,
    Decade(i32),
    Overflow,
}

fn decade_bounds() -> &'static Vec<BigUint> {
    static BOUNDS: OnceLock<Vec<BigUint>> = OnceLock::new();
    // wei thresholds 10^(k+18) for k in [-6, 8]
    BOUNDS.get_or_init(|| {
        (ETHER_DECADE_MIN..=ETHER_DECADE_MAX + 1)
            .map(|k| BigUint::from(10u8).pow((k + 18) as u32))
            .collect()
    })
}

/// Buckets a wei amount into the Ether value histogram.
pub fn ether_bucket(wei: &Amount256) -> EtherBucket {
    let bounds = decade_bounds();
    let v = wei.as_biguint();
    if v < &bounds[0] {
        return EtherBucket::Underflow;
    }
    if v >= bounds.last().unwrap() {
        return EtherBucket::Overflow;
    }
    for (i, upper) in bounds[1..].iter().enumerate() {
        if v < upper {
            return EtherBucket::Decade(ETHER_DECADE_MIN + i as i32);
        }
    }
    EtherBucket::Overflow
}

pub fn ether_bucket_label(bucket: EtherBucket) -> String {
    match bucket {
        EtherBucket::Underflow => "underflow".to_string(),
        EtherBucket::Decade(k) => format!("1e{k}..1e{}", k + 1),
        EtherBucket::Overflow => "overflow".to_string(),
    }
}

/// All Ether histogram buckets in emission order.
pub fn ether_bucket_order() -> Vec<EtherBucket> {
    let mut order = vec![EtherBucket::Underflow];
    order.extend((ETHER_DECADE_MIN..=ETHER_DECADE_MAX).map(EtherBucket::Decade));
    order.push(EtherBucket::Overflow);
    order
}

/// Width of the contract code size histogram buckets, in bytes.
pub const CODE_SIZE_BUCKET_BYTES: u64 = 256;

/// Lower bound of the code-size bucket containing `size`.
pub fn code_size_bucket(size: u64) -> u64 {
    size / CODE_SIZE_BUCKET_BYTES * CODE_SIZE_BUCKET_BYTES
}

pub fn code_size_bucket_label(lo: u64) -> String {
    format!("{lo}..{}", lo + CODE_SIZE_BUCKET_BYTES - 1)
}

/// The four stable error classes of the report; anything else is kept
/// under an `other:` key.
pub const KNOWN_ERROR_LABELS: [&str; 4] = ["out_of_gas", "reverted", "bad_instruction", "bad_jump_destination"];

/// Case-insensitive normalization of client error labels to stable report
/// keys. Unknown labels are preserved, lower-cased, under `other:`.
pub fn normalize_error_label(label: &str) -> String {
    let folded = label.to_lowercase();
    match folded.as_str() {
        "out of gas" => "out_of_gas".to_string(),
        "reverted" => "reverted".to_string(),
        "bad instruction" => "bad_instruction".to_string(),
        "bad jump destination" => "bad_jump_destination".to_string(),
        _ => format!("other:{folded}"),
    }
}

/// Ranks a count map: count descending, key ascending on ties.
pub fn rank_counts<K: Ord>(counts: HashMap<K, u64>) -> Vec<(K, u64)> {
    let mut entries: Vec<(K, u64)> = counts.into_iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use xbeth_core::WEI_PER_ETHER;

    #[test]
    fn interval_aligns_to_ten_thousand() {
        assert_eq!(interval_start(0), 0);
        assert_eq!(interval_start(9_999), 0);
        assert_eq!(interval_start(10_000), 10_000);
        assert_eq!(interval_start(4_321_098), 4_320_000);
    }

    #[test]
    fn ether_buckets_partition_the_range() {
        // 10^-6 Ether = 10^12 wei is the smallest in-range decade
        assert_eq!(ether_bucket(&Amount256::from(999_999_999_999u64)), EtherBucket::Underflow);
        assert_eq!(ether_bucket(&Amount256::from(1_000_000_000_000u64)), EtherBucket::Decade(-6));
        // 0.1..1 Ether, the paper's most common band
        assert_eq!(ether_bucket(&Amount256::from(WEI_PER_ETHER / 2)), EtherBucket::Decade(-1));
        assert_eq!(ether_bucket(&Amount256::from(WEI_PER_ETHER)), EtherBucket::Decade(0));
        // 10^7 Ether is still in range, 10^8 overflows
        let ten_m: Amount256 = "10000000000000000000000000".parse().unwrap();
        assert_eq!(ether_bucket(&ten_m), EtherBucket::Decade(7));
        let hundred_m: Amount256 = "100000000000000000000000000".parse().unwrap();
        assert_eq!(ether_bucket(&hundred_m), EtherBucket::Overflow);
    }

    #[test]
    fn bucket_labels_are_stable() {
        assert_eq!(ether_bucket_label(EtherBucket::Decade(-1)), "1e-1..1e0");
        assert_eq!(ether_bucket_label(EtherBucket::Decade(0)), "1e0..1e1");
        assert_eq!(code_size_bucket_label(0), "0..255");
        assert_eq!(code_size_bucket_label(code_size_bucket(958)), "768..1023");
        assert_eq!(ether_bucket_order().len(), 16);
    }

    #[test]
    fn error_normalization_is_case_insensitive() {
        assert_eq!(normalize_error_label("Out of gas"), "out_of_gas");
        assert_eq!(normalize_error_label("out of gas"), "out_of_gas");
        assert_eq!(normalize_error_label("OUT OF GAS"), "out_of_gas");
        assert_eq!(normalize_error_label("Reverted"), "reverted");
        assert_eq!(normalize_error_label("Bad instruction"), "bad_instruction");
        assert_eq!(normalize_error_label("Bad jump destination"), "bad_jump_destination");
        assert_eq!(normalize_error_label("Stack underflow"), "other:stack underflow");
    }

    #[test]
    fn ranking_breaks_ties_by_key() {
        let mut counts = HashMap::new();
        counts.insert("b".to_string(), 3);
        counts.insert("a".to_string(), 3);
        counts.insert("c".to_string(), 9);
        let ranked = rank_counts(counts);
        assert_eq!(
            ranked,
            vec![("c".to_string(), 9), ("a".to_string(), 3), ("b".to_string(), 3)]
        );
    }
}
