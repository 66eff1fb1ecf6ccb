//! Deterministic output primitives: %.12g-style float formatting, CSV
//! assembly, the JSON report envelope, and single-polyline SVG documents.
//!
//! All number rendering is locale-independent (always `.`), all orderings
//! fixed, so identical configs produce byte-identical artifacts.

use std::fmt::Write as _;

/// %g-style rendering with `sig` significant digits: fixed notation while
/// the decimal exponent sits in [-4, sig), scientific otherwise, trailing
/// zeros stripped.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // one rounding, then pure string assembly from the rounded digits
    let sci = format!("{:.*e}", sig - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("e-format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if exp < -4 || exp >= sig as i32 {
        let frac = digits[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{}", &digits[..1], exp)
        } else {
            format!("{}.{}e{}", &digits[..1], frac, exp)
        }
    } else if exp >= 0 {
        let point = exp as usize + 1;
        let int_part = &digits[..point.min(digits.len())];
        let int_pad = "0".repeat(point.saturating_sub(digits.len()));
        let frac = if point < digits.len() {
            digits[point..].trim_end_matches('0')
        } else {
            ""
        };
        if frac.is_empty() {
            format!("{int_part}{int_pad}")
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        let frac_digits = format!("{zeros}{digits}");
        let frac = frac_digits.trim_end_matches('0');
        format!("0.{frac}")
    };
    format!("{sign}{body}")
}

/// Default 12-significant-digit rendering used in CSV payloads.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

/// CSV document under construction; guarantees exactly one header row,
/// comma separation and `\n` endings.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "CSV row width mismatch");
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// JSON report envelope: {"config": ..., "results": [...], "checks": [...]}.
pub fn json_report(
    config: serde_json::Value,
    results: Vec<serde_json::Value>,
    checks: Vec<serde_json::Value>,
) -> String {
    let mut root = serde_json::Map::new();
    root.insert("config".into(), config);
    root.insert("results".into(), serde_json::Value::Array(results));
    root.insert("checks".into(), serde_json::Value::Array(checks));
    let mut out =
        serde_json::to_string_pretty(&serde_json::Value::Object(root)).expect("report serializes");
    out.push('\n');
    out
}

pub fn json_check(name: &str, pass: bool, measured: f64, bound: f64) -> serde_json::Value {
    serde_json::json!({
        "name": name,
        "pass": pass,
        "measured": measured,
        "bound": bound,
    })
}

/// One curve for the SVG emitter.
pub struct SvgCurve {
    pub points: Vec<[f64; 2]>,
    pub stroke: &'static str,
}

/// SVG 1.1 document with one `<polyline>` per curve, a viewBox normalized
/// to the data with 5% padding, and run metadata in an XML comment.
/// y flips so the mathematical orientation renders upright.
pub fn svg_document(curves: &[SvgCurve], metadata: &str) -> String {
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for c in curves {
        for p in &c.points {
            let q = [p[0], -p[1]];
            for d in 0..2 {
                min[d] = min[d].min(q[d]);
                max[d] = max[d].max(q[d]);
            }
        }
    }
    let span = [(max[0] - min[0]).max(1e-12), (max[1] - min[1]).max(1e-12)];
    let pad = 0.05 * span[0].max(span[1]);
    let view = format!(
        "{} {} {} {}",
        fmt_sig(min[0] - pad, 6),
        fmt_sig(min[1] - pad, 6),
        fmt_sig(span[0] + 2.0 * pad, 6),
        fmt_sig(span[1] + 2.0 * pad, 6),
    );
    let stroke_width = fmt_sig(0.004 * span[0].max(span[1]), 3);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{view}\">"
    );
    let _ = writeln!(out, "<!-- {metadata} -->");
    for c in curves {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|p| format!("{},{}", fmt_sig(p[0], 6), fmt_sig(-p[1], 6)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{stroke_width}\" points=\"{}\"/>",
            c.stroke,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_fixed_range() {
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(-0.5, 12), "-0.5");
        assert_eq!(fmt_sig(0.423712751938, 12), "0.423712751938");
        assert_eq!(fmt_sig(1234.5, 12), "1234.5");
        assert_eq!(fmt_sig(0.0001, 12), "0.0001");
    }

    #[test]
    fn fmt_sig_scientific_range() {
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-7");
        assert_eq!(fmt_sig(-2.25e15, 12), "-2.25e15");
        assert_eq!(fmt_sig(1e12, 12), "1e12");
    }

    #[test]
    fn fmt_sig_rounds_at_precision() {
        assert_eq!(fmt_sig(0.1234567890123456, 12), "0.123456789012");
        assert_eq!(fmt_sig(999999999999.9, 12), "1e12");
        assert_eq!(fmt_sig(std::f64::consts::PI, 6), "3.14159");
    }

    #[test]
    fn fmt_sig_specials() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(-0.0, 12), "0");
        assert_eq!(fmt_sig(f64::INFINITY, 12), "inf");
        assert_eq!(fmt_sig(f64::NAN, 12), "nan");
    }

    #[test]
    fn csv_shape() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&["1".into(), "2".into()]);
        assert_eq!(c.finish(), "a,b\n1,2\n");
    }

    #[test]
    fn svg_has_one_polyline_per_curve() {
        let doc = svg_document(
            &[
                SvgCurve {
                    points: vec![[0.0, 0.0], [1.0, 1.0]],
                    stroke: "black",
                },
                SvgCurve {
                    points: vec![[0.0, 1.0], [1.0, 0.0]],
                    stroke: "red",
                },
            ],
            "test",
        );
        assert_eq!(doc.matches("<polyline").count(), 2);
        assert!(doc.contains("<!-- test -->"));
        assert!(doc.contains("viewBox="));
        assert!(doc.starts_with("<svg"));
    }
}
