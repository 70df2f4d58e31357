//! Deterministic text emission. All CSV output formats floats with 17
//! significant digits so that identical runs produce byte-identical files.

/// Format a float with 17 significant digits (scientific notation).
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{:.16e}", x)
}

/// Join already-formatted fields into one CSV record.
pub fn csv_record<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for (i, f) in fields.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(f.as_ref());
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(1.5), "1.5000000000000000e0");
        assert_eq!(fmt_f64(-0.125), "-1.2500000000000000e-1");
    }

    #[test]
    fn csv_record_joins() {
        assert_eq!(csv_record(["a", "b", "c"]), "a,b,c\n");
    }
}
