//! Deterministic text output.
//!
//! All numbers are printed with nine significant digits in scientific
//! notation so that identical runs produce byte-identical files.

use std::io::Write;

use crate::CliError;

/// Formats a value with nine significant digits.  Negative zero is folded
/// into zero so equal values always print identically.
pub fn fmt(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn write_output(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::config(format!("cannot write `{p}`: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::config(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits_scientific() {
        assert_eq!(fmt(0.0699), "6.99000000e-2");
        assert_eq!(fmt(1.0), "1.00000000e0");
        assert_eq!(fmt(-3.5e-12), "-3.50000000e-12");
        assert_eq!(fmt(0.0), "0.00000000e0");
        assert_eq!(fmt(-0.0), "0.00000000e0");
    }
}
