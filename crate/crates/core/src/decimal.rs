//! Exact decimal emission helpers.
//!
//! All pipeline statistics are computed with exact integer arithmetic and
//! rounded half-even to a fixed number of decimal places only at report
//! emission, so identical inputs produce identical report bytes on every
//! platform.

use num_bigint::BigUint;

use crate::{Amount256, WEI_PER_ETHER};

fn pow10(exp: u32) -> BigUint {
    BigUint::from(10u8).pow(exp)
}

/// Divides `numer / denom` exactly and renders the quotient with
/// `frac_digits` decimal places, rounding half-even.
///
/// Panics if `denom` is zero; callers guard empty inputs explicitly.
pub fn div_decimal_half_even(numer: &BigUint, denom: &BigUint, frac_digits: u32) -> String {
    assert!(denom != &BigUint::from(0u8), "division by zero");
    let scaled = numer * pow10(frac_digits);
    let mut quot = &scaled / denom;
    let rem = &scaled % denom;
    let twice = &rem * 2u8;
    let round_up = match twice.cmp(denom) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        // exact tie: round to even
        std::cmp::Ordering::Equal => (&quot % 2u8) == BigUint::from(1u8),
    };
    if round_up {
        quot += 1u8;
    }
    render_scaled(&quot, frac_digits)
}

/// Renders an integer that carries `frac_digits` implied decimal places.
fn render_scaled(scaled: &BigUint, frac_digits: u32) -> String {
    if frac_digits == 0 {
        return scaled.to_string();
    }
    let scale = pow10(frac_digits);
    let int_part = scaled / &scale;
    let frac_part = scaled % &scale;
    format!("{}.{:0>width$}", int_part, frac_part.to_string(), width = frac_digits as usize)
}

/// `numer / denom` with `frac_digits` places, over machine integers.
pub fn div_u128_half_even(numer: u128, denom: u128, frac_digits: u32) -> String {
    div_decimal_half_even(&BigUint::from(numer), &BigUint::from(denom), frac_digits)
}

/// Converts a wei amount to Ether rounded to two decimal places, the
/// report form for all Ether-denominated scalars.
pub fn wei_to_ether_2dp(wei: &Amount256) -> String {
    div_decimal_half_even(wei.as_biguint(), &BigUint::from(WEI_PER_ETHER), 2)
}

/// Converts a wei amount to an exact Ether decimal string: full 18-digit
/// fraction with trailing zeros trimmed, no fraction for whole numbers —
/// e.g. `1500000000000000000` → `"1.5"`, `2 * 10^18` → `"2"`.
pub fn wei_to_ether_exact(wei: &Amount256) -> String {
    biguint_wei_to_ether_exact(wei.as_biguint())
}

/// Exact Ether rendering over an unbounded wei sum (interval totals can
/// exceed a single 256-bit transfer).
pub fn biguint_wei_to_ether_exact(wei: &BigUint) -> String {
    let scale = BigUint::from(WEI_PER_ETHER);
    let int_part = wei / &scale;
    let frac_part = wei % &scale;
    if frac_part == BigUint::from(0u8) {
        return int_part.to_string();
    }
    let frac = format!("{:0>18}", frac_part.to_string());
    format!("{}.{}", int_part, frac.trim_end_matches('0'))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u128) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn rounds_half_even_at_ties() {
        // 0.125 -> 0.12 (down to even), 0.135 -> 0.14 (up to even)
        assert_eq!(div_u128_half_even(125, 1000, 2), "0.12");
        assert_eq!(div_u128_half_even(135, 1000, 2), "0.14");
        // plain nearest
        assert_eq!(div_u128_half_even(1249, 10000, 2), "0.12");
        assert_eq!(div_u128_half_even(1251, 10000, 2), "0.13");
    }

    #[test]
    fn pads_fraction_with_zeros() {
        assert_eq!(div_u128_half_even(1, 100, 2), "0.01");
        assert_eq!(div_u128_half_even(3, 1, 2), "3.00");
        assert_eq!(div_u128_half_even(7, 2, 0), "4"); // 3.5 ties to even 4
        assert_eq!(div_u128_half_even(5, 2, 0), "2"); // 2.5 ties to even 2
    }

    #[test]
    fn table_mean_cross_checks() {
        // published totals: 491,562,222 txs over 8,100,000 blocks
        assert_eq!(div_u128_half_even(491_562_222, 8_100_000, 2), "60.69");
    }

    #[test]
    fn wei_conversions() {
        assert_eq!(wei_to_ether_2dp(&Amount256::zero()), "0.00");
        assert_eq!(wei_to_ether_2dp(&Amount256::from(WEI_PER_ETHER)), "1.00");
        // Table II maximum: 11,901,464.24 Ether survives the round trip
        let max_wei: Amount256 = "11901464240000000000000000".parse().unwrap();
        assert_eq!(wei_to_ether_2dp(&max_wei), "11901464.24");
    }

    #[test]
    fn exact_ether_trims_trailing_zeros() {
        assert_eq!(wei_to_ether_exact(&Amount256::from(WEI_PER_ETHER)), "1");
        assert_eq!(wei_to_ether_exact(&Amount256::from(1_500_000_000_000_000_000u128)), "1.5");
        assert_eq!(wei_to_ether_exact(&Amount256::from(1u64)), "0.000000000000000001");
        assert_eq!(wei_to_ether_exact(&Amount256::zero()), "0");
    }

    #[test]
    fn big_numerators_stay_exact() {
        // mean of two maximal amounts equals the maximum
        let max = Amount256::max_value();
        let sum = max.as_biguint() * 2u8;
        assert_eq!(div_decimal_half_even(&sum, &big(2), 0), max.to_string());
    }
}
