//! Number formatting and time-grid parsing.

/// `%g`-style formatting with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses `a..b` (inclusive, spaced by `step`), a comma list, or a single
/// number.
pub fn parse_times(spec: &str, step: f64) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let a = parse_num(a)?;
        let b = parse_num(b)?;
        if !(step > 0.0) || !step.is_finite() {
            return Err(format!("step must be positive, got {step}"));
        }
        if b < a {
            return Err(format!("empty range `{spec}`"));
        }
        let count = ((b - a) / step * (1.0 + 1e-12)).floor() as usize + 1;
        if count > 10_000_000 {
            return Err(format!("range `{spec}` with step {step} is too large"));
        }
        return Ok((0..count).map(|k| a + k as f64 * step).collect());
    }
    let times = spec.split(',').map(parse_num).collect::<Result<Vec<_>, _>>()?;
    if times.is_empty() {
        return Err("no times given".into());
    }
    Ok(times)
}

/// One time per line; blank lines, `#` comments and a `t` header are skipped.
pub fn parse_times_file(text: &str) -> Result<Vec<f64>, String> {
    let times = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#') && *l != "t")
        .map(parse_num)
        .collect::<Result<Vec<_>, _>>()?;
    if times.is_empty() {
        return Err("times file contains no times".into());
    }
    Ok(times)
}

fn parse_num(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("malformed time `{s}`")),
    }
}
