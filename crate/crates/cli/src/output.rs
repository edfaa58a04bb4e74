//! Deterministic serialization: JSON with a fixed field order and a
//! fixed 17-significant-digit float format, CSV with RFC-4180 quoting
//! and LF line endings. Identical inputs produce byte-identical files.

use indefspec_core::{Complex64, SolverConfig};

/// 17 significant digits (1 + 16 fractional), scientific notation.
/// Round-trips every f64 and never varies with locale or value range.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn json_complex(z: Complex64) -> String {
    format!("{{\"re\":{},\"im\":{}}}", fmt_f64(z.re), fmt_f64(z.im))
}

pub fn json_config(config: &SolverConfig) -> String {
    let grids: Vec<String> = config.fd_grid_sizes.iter().map(|g| g.to_string()).collect();
    format!(
        "{{\"residual_tol\":{},\"bracket_width_tol\":{},\"quad_rel_tol\":{},\"pole_exclusion\":{},\"fd_grid_sizes\":[{}],\"continuation_steps\":{}}}",
        fmt_f64(config.residual_tol),
        fmt_f64(config.bracket_width_tol),
        fmt_f64(config.quad_rel_tol),
        fmt_f64(config.pole_exclusion),
        grids.join(","),
        config.continuation_steps,
    )
}

/// One CSV field under RFC-4180: quote only when the content needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    let mut row = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    row.push('\n');
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_mantissa() {
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.001).len(), "-1.0000000000000000e-3".len());
        // Round trip.
        for &x in &[23.64631954319389, -1.0e-13, 3.3e300, 7.0 / 3.0] {
            let parsed: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(parsed, x);
        }
    }

    #[test]
    fn json_escaping() {
        assert_eq!(json_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_row(&["a".into(), "b,c".into()]), "a,\"b,c\"\n");
    }
}
