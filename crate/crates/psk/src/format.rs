//! Deterministic number formatting for reports.

/// Rounds to 12 significant digits and prints the shortest representation of
/// the rounded value; negative zero prints as `0`. Magnitudes below 1e-6 or
/// from 1e15 up use exponent notation.
pub fn real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".into()
    } else if !(1e-6..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

#[cfg(test)]
mod tests {
    use super::real;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(real(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(real(-0.0), "0");
        assert_eq!(real(-1e-300 * 1e-300), "0");
        assert_eq!(real(1.5), "1.5");
        assert_eq!(real(-6.000000000000001), "-6");
        assert_eq!(real(2.220446049250313e-16), "2.22044604925e-16");
        assert_eq!(real(-1.5e20), "-1.5e20");
        assert_eq!(real(0.00025), "0.00025");
    }
}
