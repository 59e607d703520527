//! Decimal rendering with round-half-away-from-zero.
//!
//! `format!("{:.2}", x)` rounds exact binary ties to even (`0.125` becomes
//! `0.12`); tables here need `0.13`, so rounding is done on the exact
//! decimal expansion instead.

/// Enough fractional digits to print any finite `f64` exactly.
const EXACT_DIGITS: usize = 1074;

/// `x` rounded to `places` decimals, ties away from zero.
///
/// Non-finite values render as `inf`, `-inf` and `nan`. Results that round
/// to zero never carry a minus sign.
pub fn round_half_away(x: f64, places: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exact = format!("{:.*}", EXACT_DIGITS, x.abs());
    let (int_part, frac) = exact.split_once('.').expect("fixed-point output has a dot");
    let mut digits: Vec<u8> = int_part.bytes().chain(frac.bytes().take(places)).collect();
    if frac.as_bytes()[places] >= b'5' {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, b'1');
                break;
            }
            i -= 1;
            if digits[i] == b'9' {
                digits[i] = b'0';
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - places;
    let mut out = String::with_capacity(digits.len() + 2);
    if x < 0.0 && digits.iter().any(|&d| d != b'0') {
        out.push('-');
    }
    out.push_str(std::str::from_utf8(&digits[..split]).unwrap());
    if places > 0 {
        out.push('.');
        out.push_str(std::str::from_utf8(&digits[split..]).unwrap());
    }
    out
}

/// Table style: no leading zero before the decimal point (`.98`).
pub fn table_number(x: f64, places: usize) -> String {
    let s = round_half_away(x, places);
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        format!("-.{rest}")
    } else {
        s
    }
}
