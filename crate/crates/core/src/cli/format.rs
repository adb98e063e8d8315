//! Number formatting for CSV columns and human tables.

/// Shortest text that parses back to exactly `v`; scientific notation
/// outside `[1e-5, 1e17)`. Signed zero prints as `0`.
pub fn exact(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a.is_finite() && (1e-5..1e17).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Nine significant digits, for tables meant to be read.
pub fn readable(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-4..1e9).contains(&a) {
        return format!("{v:.8e}");
    }
    let decimals = (8 - a.log10().floor() as i32).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trips() {
        for v in [
            1.0,
            -12.566370614359172,
            1e-300,
            3.0e-6,
            0.1,
            2.5e20,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(exact(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(exact(-0.0), "0");
        assert_eq!(exact(1e-7), "1e-7");
        assert_eq!(exact(0.5), "0.5");
    }

    #[test]
    fn readable_digits() {
        assert_eq!(readable(37.69911184307752), "37.6991118");
        assert_eq!(readable(0.5), "0.500000000");
        assert_eq!(readable(1e-7), "1.00000000e-7");
    }
}
