//! Number formatting shared by the text reports, tables and CSV output.

/// `%g`-style formatting with `sig` significant digits: fixed notation for
/// moderate magnitudes, scientific otherwise, trailing zeros trimmed.
pub fn fmt_g(value: f64, sig: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let sig = sig.max(1);
    let exponent = value.abs().log10().floor() as i32;
    // rounding can bump the exponent (9.999995 -> 10.0000)
    let sci = format!("{:.*e}", sig - 1, value);
    let (mantissa, exp_str) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp_str.parse().unwrap_or(exponent);
    if exp < -4 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, value)).to_string()
    }
}

/// Shortest round-trip decimal, switching to scientific notation for very
/// small or very large magnitudes.
pub fn fmt_plain(value: f64) -> String {
    let a = value.abs();
    if value == 0.0 || (1e-4..1e15).contains(&a) || !value.is_finite() {
        format!("{value}")
    } else {
        format!("{value:e}")
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_printf() {
        assert_eq!(fmt_g(0.761394_2, 6), "0.761394");
        assert_eq!(fmt_g(1.2214028, 6), "1.2214");
        assert_eq!(fmt_g(1.648937e-11, 6), "1.64894e-11");
        assert_eq!(fmt_g(4.5076e-8, 6), "4.5076e-8");
        assert_eq!(fmt_g(9.9999996, 6), "10");
        assert_eq!(fmt_g(-2.5, 6), "-2.5");
        assert_eq!(fmt_g(1234567.0, 6), "1.23457e6");
        assert_eq!(fmt_g(0.0, 6), "0");
    }

    #[test]
    fn plain_format() {
        assert_eq!(fmt_plain(0.5), "0.5");
        assert_eq!(fmt_plain(1.5e-11), "1.5e-11");
        assert_eq!(fmt_plain(0.0), "0");
        assert_eq!(fmt_plain(3.0), "3");
    }
}
