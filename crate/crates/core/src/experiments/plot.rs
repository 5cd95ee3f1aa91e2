use std::collections::BTreeMap;
use std::fmt::Write;

use super::sweep::read_rows;
use crate::error::{Error, Result};

/// Five-step ramp from low to high metric values.
pub const RAMP: [&str; 5] = ["#f7fbff", "#c6dbef", "#6baed6", "#2171b5", "#08306b"];
const MISSING: &str = "#ffffff";
const CELL: usize = 40;
const LEFT: usize = 70;
const TOP: usize = 30;
const LEGEND_GAP: usize = 30;

fn ramp_color(v: f64) -> &'static str {
    if !v.is_finite() {
        return MISSING;
    }
    let idx = (v.clamp(0.0, 1.0) * RAMP.len() as f64).floor() as usize;
    RAMP[idx.min(RAMP.len() - 1)]
}

/// Ordered key for grid coordinates.
fn key(v: f64) -> u64 {
    // Monotone map of f64 bits onto u64 for sorting.
    let b = v.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

/// Heatmap of `metric` over the `(x, y)` grid of a sweep CSV, using the
/// summary rows. Cells sharing coordinates are averaged in file order.
pub fn phase_diagram(csv_text: &str, x_axis: &str, y_axis: &str, metric: &str) -> Result<String> {
    let rows = read_rows(csv_text.as_bytes())?;
    let rows: Vec<_> = rows.into_iter().filter(|r| r.is_summary()).collect();
    for name in [x_axis, y_axis, metric] {
        if rows.first().is_none_or(|r| r.column(name).is_none()) {
            return Err(Error::InvalidParameters(format!(
                "column {name:?} not present in sweep summary rows"
            )));
        }
    }
    let mut cells: BTreeMap<(u64, u64), (f64, f64, f64, usize)> = BTreeMap::new();
    for r in &rows {
        let (x, y, m) = (
            r.column(x_axis).unwrap(),
            r.column(y_axis).unwrap(),
            r.column(metric).unwrap(),
        );
        let e = cells.entry((key(x), key(y))).or_insert((x, y, 0.0, 0));
        e.2 += m;
        e.3 += 1;
    }
    let mut xs: Vec<f64> = cells.values().map(|c| c.0).collect();
    let mut ys: Vec<f64> = cells.values().map(|c| c.1).collect();
    for v in [&mut xs, &mut ys] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let (w, h) = (xs.len(), ys.len());
    let width = LEFT + w * CELL + LEGEND_GAP + 90;
    let height = (TOP + h * CELL + 50).max(TOP + RAMP.len() * 20 + 40);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="16" text-anchor="middle">{metric}</text>"#,
        LEFT + w * CELL / 2
    );
    for ((_, _), &(x, y, sum, count)) in &cells {
        let col = xs.iter().position(|&v| v == x).unwrap();
        // Largest y at the top.
        let row = h - 1 - ys.iter().position(|&v| v == y).unwrap();
        let value = sum / count as f64;
        let _ = writeln!(
            s,
            r#"<rect class="cell" x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}" data-x="{x}" data-y="{y}" data-value="{value}"/>"#,
            LEFT + col * CELL,
            TOP + row * CELL,
            ramp_color(value)
        );
    }
    for (i, x) in xs.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text class="xtick" x="{}" y="{}" text-anchor="middle">{x}</text>"#,
            LEFT + i * CELL + CELL / 2,
            TOP + h * CELL + 14
        );
    }
    for (i, y) in ys.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text class="ytick" x="{}" y="{}" text-anchor="end">{y}</text>"#,
            LEFT - 6,
            TOP + (h - 1 - i) * CELL + CELL / 2 + 4
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{}" y="{}" text-anchor="middle">{x_axis}</text>"#,
        LEFT + w * CELL / 2,
        TOP + h * CELL + 34
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{y_axis}</text>"#,
        TOP + h * CELL / 2,
        TOP + h * CELL / 2
    );
    let lx = LEFT + w * CELL + LEGEND_GAP;
    for (i, color) in RAMP.iter().enumerate().rev() {
        let ly = TOP + (RAMP.len() - 1 - i) * 20;
        let lo = i as f64 / RAMP.len() as f64;
        let hi = (i + 1) as f64 / RAMP.len() as f64;
        let _ = writeln!(
            s,
            r#"<rect class="legend" x="{lx}" y="{ly}" width="16" height="16" fill="{color}"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{lo}-{hi}</text>"#,
            lx + 22,
            ly + 12
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "n,k,p,q,trial,seed,exact,agreement,k_hat,separation_ratio,eps_max,runtime_ms\n";

    fn summary(p: f64, q: f64, rate: f64) -> String {
        format!("10,2,{p},{q},-1,0,{rate},1,2,3,0.5,0\n")
    }

    #[test]
    fn single_cell() {
        let csv = format!("{HEADER}10,2,0.9,0.1,0,1,1,1,2,3,0.5,0\n{}", summary(0.9, 0.1, 1.0));
        let svg = phase_diagram(&csv, "q", "p", "recovery_rate").unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 1);
        assert!(svg.contains(RAMP[4]));
    }

    #[test]
    fn extremes_use_ramp_ends() {
        assert_eq!(ramp_color(0.0), RAMP[0]);
        assert_eq!(ramp_color(1.0), RAMP[4]);
        assert_eq!(ramp_color(0.5), RAMP[2]);
        assert_eq!(ramp_color(f64::NAN), MISSING);
    }

    #[test]
    fn missing_axis_is_an_error() {
        let csv = format!("{HEADER}{}", summary(0.9, 0.1, 1.0));
        assert!(phase_diagram(&csv, "r", "p", "exact").is_err());
        assert!(phase_diagram(&csv, "q", "p", "nope").is_err());
        assert!(phase_diagram(HEADER, "q", "p", "exact").is_err());
    }

    #[test]
    fn deterministic_output() {
        let csv = format!(
            "{HEADER}{}{}{}",
            summary(0.9, 0.1, 1.0),
            summary(0.9, 0.3, 0.4),
            summary(0.5, 0.1, 0.0)
        );
        let a = phase_diagram(&csv, "q", "p", "exact").unwrap();
        let b = phase_diagram(&csv, "q", "p", "exact").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches(r#"class="cell""#).count(), 3);
    }
}
