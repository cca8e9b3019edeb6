/// Format `x` with `digits` significant digits.
///
/// Fixed notation is used for magnitudes in `[1e-5, 10^digits)`, scientific
/// otherwise. Exact zero prints as `0`.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    // Round first so 9.9999999996 is treated as exponent 1, not 0.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if exp < -5 || exp >= digits as i32 {
        sci
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    }
}

/// Nine significant digits, the precision used in every CSV and report.
pub fn sig9(x: f64) -> String {
    sig(x, 9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(1.8535533905932737), "1.85355339");
        assert_eq!(sig9(0.5), "0.500000000");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(0.25), "0.250000000");
        assert_eq!(sig9(9.99999999996), "10.0000000");
        assert_eq!(sig9(-0.0123), "-0.0123000000");
        assert_eq!(sig9(1.0e-17), "1.00000000e-17");
    }
}
