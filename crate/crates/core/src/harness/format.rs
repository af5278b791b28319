/// Formats `x` with `sig` significant digits in the style of C's `%g`:
/// fixed notation for exponents in `[-4, sig)`, scientific otherwise, with
/// trailing zeros removed.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

/// `x` rounded to `sig` significant digits, exactly the value that
/// [`format_sig`] prints.
pub fn round_sig(x: f64, sig: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", sig - 1, x).parse().expect("round trip")
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
