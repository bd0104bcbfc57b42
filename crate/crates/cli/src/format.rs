//! Number formatting for CSV cells.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Six significant digits, `%g` style.
    #[default]
    Short,
    /// Shortest representation that parses back to the same `f64`.
    Full,
}

pub fn number(value: f64, precision: Precision) -> String {
    match precision {
        Precision::Short => significant(value, 6),
        Precision::Full => format!("{value:?}"),
    }
}

/// `value` rounded to `digits` significant digits, trailing zeros removed.
/// Uses scientific notation when the decimal exponent is below -4 or at
/// least `digits`, as C's `%g` does.
pub fn significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return if value.is_nan() { "nan".into() } else if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
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
    fn matches_printf_g() {
        let cases = [
            (0.30119421191220214, "0.301194"),
            (1.0, "1"),
            (0.2, "0.2"),
            (12.5, "12.5"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234567, "1.23457e-05"),
            (-2.5e-7, "-2.5e-07"),
            (0.9999996, "1"),
            (9.9999996e-5, "0.0001"),
        ];
        for (v, want) in cases {
            assert_eq!(significant(v, 6), want, "{v}");
        }
    }

    #[test]
    fn full_precision_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.5e-300, 0.41005627] {
            assert_eq!(number(v, Precision::Full).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn short_values_reparse() {
        for v in [0.30119421, 1e-9, 7.0, 123.456789] {
            let back: f64 = number(v, Precision::Short).parse().unwrap();
            assert!((back - v).abs() <= 1e-5 * v.abs());
        }
    }
}
