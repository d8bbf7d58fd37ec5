//! Output formats: CSV with fixed headers, JSON, and a bare-bones SVG plot.

use std::fmt::Write as _;
use std::io::Write;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::continuants::ExactRational;
use crate::error::{CfError, Result};

/// Writes `rows` as comma-separated ASCII with a header row and LF endings.
/// Missing values become empty fields.
pub fn write_csv<W: Write, R: Serialize>(out: W, rows: &[R]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in rows {
        w.serialize(row).map_err(io_error)?;
    }
    w.flush().map_err(|e| io_error(e.into()))
}

/// Header-only CSV for an empty table, since `csv` derives headers from the first row.
pub fn write_csv_with_header<W: Write, R: Serialize>(mut out: W, header: &str, rows: &[R]) -> Result<()> {
    if rows.is_empty() {
        writeln!(out, "{header}").map_err(|e| io_error(e.into()))?;
        return Ok(());
    }
    write_csv(out, rows)
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CfError::DomainError(format!("json: {e}")))?;
    writeln!(out).map_err(|e| io_error(e.into()))
}

fn io_error(e: csv::Error) -> CfError {
    CfError::DomainError(format!("write failed: {e}"))
}

/// `value` with 12 significant digits, in plain decimal notation.
pub fn decimal12(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{value:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.99… → 10.0…
    let rounded: f64 = s.parse().unwrap_or(value);
    if rounded.abs().log10().floor() as i32 > magnitude && decimals > 0 {
        return format!("{value:.*}", decimals - 1);
    }
    s
}

/// `num/den ≈ decimal`, e.g. `1/15 ≈ 0.0666666666667`.
pub fn format_rational(r: &ExactRational) -> String {
    let approx = if r.denom().is_zero() { f64::NAN } else { ratio_to_f64(r) };
    format!("{}/{} ≈ {}", r.numer(), r.denom(), decimal12(approx))
}

fn ratio_to_f64(r: &ExactRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down to fit, keeping 64 bits of the denominator
            let shift = r.denom().bits().saturating_sub(64).max(r.numer().abs().bits().saturating_sub(64));
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// How a series is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    Dots,
    Line,
}

/// A standalone SVG with axes, tick labels at the extremes, and one series.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)], mark: Mark) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 56.0;
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = finite.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if finite.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        svg,
        r#"<path d="M{PAD} {top} V{bottom} H{right}" fill="none" stroke="black"/>"#,
        top = PAD / 2.0,
        bottom = H - PAD,
        right = W - PAD / 2.0
    );
    let tick = |v: f64| decimal12(v).trim_end_matches('0').trim_end_matches('.').to_string();
    let _ = writeln!(svg, r#"<text x="{PAD}" y="{}" font-size="10" text-anchor="middle">{}</text>"#, H - PAD + 14.0, tick(x0));
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#, W - PAD, H - PAD + 14.0, tick(x1));
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#, PAD - 4.0, H - PAD, tick(y0));
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#, PAD - 4.0, PAD + 4.0, tick(y1));
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{y}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {y})">{}</text>"#,
        escape(y_label),
        y = H / 2.0
    );
    match mark {
        Mark::Dots => {
            let _ = writeln!(svg, r#"<g fill="steelblue">"#);
            for &(x, y) in &finite {
                let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, sx(x), sy(y));
            }
            let _ = writeln!(svg, "</g>");
        }
        Mark::Line => {
            let path: Vec<String> = finite.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(svg, r#"<polyline fill="none" stroke="steelblue" points="{}"/>"#, path.join(" "));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{AkRow, DigitBucket, FreqRow, L0Row, PeriodStats};
    use num_bigint::BigInt;
    use num_rational::Ratio;

    fn csv_of<R: Serialize>(rows: &[R]) -> String {
        let mut buf = Vec::new();
        write_csv(&mut buf, rows).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_headers() {
        let ak = [AkRow { k: 1, smallest_prime: Some(3), period_of_smallest: Some(2), count: 7 }];
        assert_eq!(csv_of(&ak), "k,smallest_prime,period,count\n1,3,2,7\n");
        let l0 = [L0Row { i: 4, count: 0, smallest: None }];
        assert_eq!(csv_of(&l0), "i,count,smallest\n4,0,\n");
        let ps = [PeriodStats { m: 1, p: 2, period: 1, ratio: None }];
        assert_eq!(csv_of(&ps), "m,p,T,ratio\n1,2,1,\n");
        let fr = [FreqRow { position: 1, digit: DigitBucket::AtLeast(4), count: 1, total: 4, empirical: 0.25, gauss_kuzmin: 0.5 }];
        assert_eq!(csv_of(&fr), "position,digit,empirical,gauss_kuzmin\n1,>=4,0.25,0.5\n");
    }

    #[test]
    fn empty_table_keeps_header() {
        let mut buf = Vec::new();
        write_csv_with_header::<_, L0Row>(&mut buf, "i,count,smallest", &[]).unwrap();
        assert_eq!(buf, b"i,count,smallest\n");
    }

    #[test]
    fn rational_text() {
        let r = |n: i64, d: i64| Ratio::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(format_rational(&r(1, 15)), "1/15 ≈ 0.0666666666667");
        assert_eq!(format_rational(&r(1, 2)), "1/2 ≈ 0.500000000000");
        assert_eq!(decimal12(123.0), "123.000000000");
        assert_eq!(decimal12(9.9999999999999), "10.0000000000");
        let huge = Ratio::new(BigInt::from(1), BigInt::from(10).pow(400));
        assert!(format_rational(&huge).ends_with("e-400") || format_rational(&huge).contains("≈ 0"));
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = svg_plot("T <&> m", "m", "T", &[(1.0, 1.0), (2.0, 2.0), (3.0, 1.0)], Mark::Dots);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("T &lt;&amp;&gt; m"));
        let line = svg_plot("", "", "", &[], Mark::Line);
        assert!(line.contains("<polyline"));
    }
}
