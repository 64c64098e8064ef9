//! Complex literals `a`, `bi`, `a+bi`, `a-bi` and comma-separated lists.

use std::str::FromStr;

use lspline_core::{Complex64, FrequencyVector};

use crate::error::{CliError, CliResult};

/// Parse one complex literal. Whitespace anywhere is ignored; a bare `i`
/// stands for `1i`.
pub fn parse_complex(text: &str) -> CliResult<Complex64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Parse(format!("malformed complex literal {text:?}"));
    let doubled_sign = compact.as_bytes().windows(2).any(|w| matches!(w, [b'+' | b'-', b'+' | b'-']));
    if compact.is_empty() || doubled_sign || compact.contains(['j', 'J']) {
        return Err(bad());
    }
    let z = Complex64::from_str(&compact).map_err(|_| bad())?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

pub fn parse_real(text: &str) -> CliResult<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("malformed number {text:?}")))?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!("non-finite number {text:?}")));
    }
    Ok(v)
}

pub fn parse_real_list(text: &str) -> CliResult<Vec<f64>> {
    text.split(',').map(parse_real).collect()
}

/// Exactly four comma-separated literals.
pub fn parse_lambda(text: &str) -> CliResult<FrequencyVector> {
    let values = text.split(',').map(parse_complex).collect::<CliResult<Vec<_>>>()?;
    if values.len() != 4 {
        return Err(CliError::Parse(format!("expected 4 frequencies, got {}", values.len())));
    }
    Ok(FrequencyVector::new(values)?)
}
