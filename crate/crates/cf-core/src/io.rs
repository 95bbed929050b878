//! Plain-text output helpers.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Formats `x` with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if a == 0.0 || (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:.11e}")
    }
}

/// Writes a header and rows of numbers as CSV.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut s = String::with_capacity(32 * rows.len() * header.len().max(1));
    s.push_str(&header.join(","));
    s.push('\n');
    for r in rows {
        for (i, v) in r.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", fmt12(*v));
        }
        s.push('\n');
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(0.632_120_558_828_557_7), "0.632120558829");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1e-300), "1.00000000000e-300");
        assert_eq!(fmt12(-2.5), "-2.5");
    }
}
