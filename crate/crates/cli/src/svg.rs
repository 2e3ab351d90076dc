//! Phase map of a sweep as a plain SVG grid.

use std::fmt::Write;

use competing_exchange::PhaseLabel;

use crate::commands::sweep::GridPoint;

const CELL: usize = 16;
const MARGIN: usize = 40;
const LEGEND_WIDTH: usize = 90;

pub fn colour(p: PhaseLabel) -> &'static str {
    match p {
        PhaseLabel::Ferro => "#d62728",
        PhaseLabel::FerroSpinGlass => "#ff9896",
        PhaseLabel::SpinGlass => "#2ca02c",
        PhaseLabel::AntiferroSpinGlass => "#aec7e8",
        PhaseLabel::Antiferro => "#1f77b4",
        PhaseLabel::None => "#ffffff",
    }
}

const LEGEND: [PhaseLabel; 6] = [
    PhaseLabel::Ferro,
    PhaseLabel::FerroSpinGlass,
    PhaseLabel::SpinGlass,
    PhaseLabel::AntiferroSpinGlass,
    PhaseLabel::Antiferro,
    PhaseLabel::None,
];

/// `points` in sweep order (a2 outer, a1 inner), `steps` per axis.
/// a1 grows to the right; a2 grows upwards.
pub fn phase_map(points: &[GridPoint], steps: usize) -> String {
    let grid = steps * CELL;
    let width = MARGIN * 2 + grid + LEGEND_WIDTH;
    let height = MARGIN * 2 + grid.max(LEGEND.len() * 20);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (idx, p) in points.iter().enumerate() {
        let (row, col) = (idx / steps, idx % steps);
        let x = MARGIN + col * CELL;
        let y = MARGIN + (steps - 1 - row) * CELL;
        let _ = writeln!(
            s,
            r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#999" stroke-width="0.5"><title>a1={} a2={} {}</title></rect>"##,
            colour(p.phase),
            p.a1,
            p.a2,
            p.phase
        );
    }
    if let (Some(first), Some(last)) = (points.first(), points.last()) {
        let bottom = MARGIN + grid;
        let right = MARGIN + grid;
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}">{}</text>"#, bottom + 14, first.a1);
        let _ = writeln!(s, r#"<text x="{right}" y="{}" text-anchor="end">{}</text>"#, bottom + 14, last.a1);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">a1</text>"#, MARGIN + grid / 2, bottom + 28);
        let _ = writeln!(s, r#"<text x="{}" y="{bottom}" text-anchor="end">{}</text>"#, MARGIN - 4, first.a2);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, MARGIN - 4, MARGIN + 10, last.a2);
        let _ = writeln!(s, r#"<text x="12" y="{}">a2</text>"#, MARGIN + grid / 2);
    }
    let lx = MARGIN * 2 + grid - 20;
    for (i, p) in LEGEND.iter().enumerate() {
        let y = MARGIN + i * 20;
        let _ = writeln!(
            s,
            r##"<rect x="{lx}" y="{y}" width="12" height="12" fill="{}" stroke="#999"/><text x="{}" y="{}">{}</text>"##,
            colour(*p),
            lx + 18,
            y + 10,
            p
        );
    }
    s.push_str("</svg>\n");
    s
}
