/// Tokenizes miner extra-data (or any short tag) into lowercase words.
///
/// Bytes are decoded as UTF-8 with invalid sequences replaced, control
/// characters stripped, the rest lower-cased and split on non-alphanumeric
/// boundaries. An empty result is normal — most blocks carry binary or
/// empty extra data.
pub fn decode_extra_text(data: &[u8]) -> Vec<String> {
    let text = String::from_utf8_lossy(data);
    let printable: String = text.chars().filter(|c| !c.is_control()).collect();
    printable
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|token| !token.is_empty())
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_passes_through_lowercased() {
        assert_eq!(decode_extra_text(b"Nanopool"), vec!["nanopool"]);
    }

    #[test]
    fn zero_bytes_yield_nothing() {
        assert_eq!(decode_extra_text(&[0u8; 32]), Vec::<String>::new());
        assert_eq!(decode_extra_text(b""), Vec::<String>::new());
    }

    #[test]
    fn splits_on_non_alphanumeric() {
        assert_eq!(decode_extra_text(b"ethermine-eu1"), vec!["ethermine", "eu1"]);
        assert_eq!(decode_extra_text(b"www.bw.com/pool"), vec!["www", "bw", "com", "pool"]);
    }

    #[test]
    fn invalid_utf8_becomes_a_boundary() {
        // 0xff is invalid; the replacement char is not alphanumeric
        assert_eq!(decode_extra_text(b"abc\xffdef"), vec!["abc", "def"]);
        // control characters are stripped before splitting, joining the runs
        assert_eq!(decode_extra_text(b"abc\x00def"), vec!["abcdef"]);
    }
}
