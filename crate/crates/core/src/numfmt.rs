//! Deterministic decimal rendering of floats.

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// `round_sig` followed by the shortest representation that round-trips.
pub fn format_sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if r == 0.0 {
        return "0".to_string();
    }
    format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(format_sig(0.1 + 0.2, 12), "0.3");
        assert_eq!(format_sig(1.0 / 3.0, 4), "0.3333");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(2048.0, 12), "2048");
        assert_eq!(format_sig(f64::INFINITY, 12), "inf");
    }
}
