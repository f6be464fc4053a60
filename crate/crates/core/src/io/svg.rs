//! Static SVG renderings of curve snapshots and circle phase portraits.

use crate::circle_ode::PhasePortrait;
use crate::io::emit::Snapshot;
use std::fmt::Write;

const EARLY: [f64; 3] = [44.0, 123.0, 182.0];
const LATE: [f64; 3] = [215.0, 25.0, 28.0];

fn time_colour(f: f64) -> String {
    let f = if f.is_finite() { f.clamp(0.0, 1.0) } else { 0.0 };
    let c: Vec<u8> = (0..3).map(|i| (EARLY[i] + f * (LATE[i] - EARLY[i])).round() as u8).collect();
    format!("rgb({},{},{})", c[0], c[1], c[2])
}

/// Decimal places that resolve `extent / 10^5`.
fn decimals(extent: f64) -> usize {
    (5 - extent.log10().floor() as i32).clamp(0, 15) as usize
}

/// Snapshots as closed polylines coloured from blue (early) to red (late),
/// with an optional dashed origin-centred circle. Data coordinates are kept,
/// with `y` flipped.
pub fn curves_svg(snaps: &[Snapshot], circle: Option<f64>) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for v in snaps.iter().flat_map(|s| &s.vertices) {
        x0 = x0.min(v.x);
        x1 = x1.max(v.x);
        y0 = y0.min(v.y);
        y1 = y1.max(v.y);
    }
    if let Some(r) = circle {
        x0 = x0.min(-r);
        x1 = x1.max(r);
        y0 = y0.min(-r);
        y1 = y1.max(r);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let extent = (x1 - x0).max(y1 - y0).max(1e-12);
    let pad = 0.05 * extent;
    let dp = decimals(extent);
    let stroke = extent * 3e-3;
    let (t_first, t_last) = match (snaps.first(), snaps.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => (0.0, 0.0),
    };
    let span = t_last - t_first;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="640" height="640" viewBox="{:.dp$} {:.dp$} {:.dp$} {:.dp$}">"#,
        x0 - pad,
        -y1 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad,
    );
    let _ = writeln!(s, r#"<rect x="{:.dp$}" y="{:.dp$}" width="100%" height="100%" fill="white"/>"#, x0 - pad, -y1 - pad);
    if let Some(r) = circle {
        let _ = writeln!(
            s,
            r#"<circle class="limit-circle" cx="0" cy="0" r="{r:.dp$}" fill="none" stroke="black" stroke-width="{stroke:.dp$}" stroke-dasharray="{:.dp$} {:.dp$}"/>"#,
            4.0 * stroke,
            3.0 * stroke,
        );
    }
    for snap in snaps {
        let f = if span > 0.0 { (snap.t - t_first) / span } else { 1.0 };
        let mut pts = String::new();
        for v in snap.vertices.iter().chain(snap.vertices.first()) {
            let _ = write!(pts, "{:.dp$},{:.dp$} ", v.x, -v.y);
        }
        let _ = writeln!(
            s,
            r#"<polyline class="snapshot" data-t="{}" points="{}" fill="none" stroke="{}" stroke-width="{stroke:.dp$}"/>"#,
            snap.t,
            pts.trim_end(),
            time_colour(f),
        );
    }
    s.push_str("</svg>\n");
    s
}

const W: f64 = 720.0;
const H: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Drift `dr/dt` of circles against `r`, arrows on the axis showing the
/// direction circles move, and `A`/`R` markers at attracting and repelling
/// zeros.
pub fn phase_portrait_svg(p: &PhasePortrait) -> String {
    let (lo, hi) = match (p.rows.first(), p.rows.last()) {
        (Some(a), Some(b)) if b.r > a.r => (a.r, b.r),
        _ => (0.0, 1.0),
    };
    // |drift| blows up near a singular origin; scale to the bulk of the samples
    let mut mags: Vec<f64> = p.rows.iter().map(|r| r.drift.abs()).filter(|x| x.is_finite()).collect();
    mags.sort_by(f64::total_cmp);
    let y_max = mags.get(mags.len() * 9 / 10).copied().unwrap_or(1.0).max(1e-12) * 1.2;

    let sx = |r: f64| MARGIN + (r - lo) / (hi - lo) * (W - 2.0 * MARGIN);
    let sy = |d: f64| H / 2.0 - d.clamp(-y_max, y_max) / y_max * (H / 2.0 - MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="grey"/>"#,
        H / 2.0,
        W - MARGIN
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}" font-size="12">r = {lo:.4}</text>"#, H - 10.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">r = {hi:.4}</text>"#, W - MARGIN, H - 10.0);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="20" font-size="12">dr/dt, n = {}</text>"#, p.n);

    let pts: Vec<String> = p
        .rows
        .iter()
        .filter(|r| r.drift.is_finite())
        .map(|r| format!("{:.2},{:.2}", sx(r.r), sy(r.drift)))
        .collect();
    let _ = writeln!(s, r#"<polyline class="drift" points="{}" fill="none" stroke="black"/>"#, pts.join(" "));

    if p.crossings.degenerate {
        let _ = writeln!(
            s,
            r#"<text class="degenerate" x="{}" y="{}" font-size="14" text-anchor="middle">every circle in range is psi-minimal</text>"#,
            W / 2.0,
            MARGIN
        );
    } else {
        let arrows = 24;
        for i in 0..arrows {
            let r = lo + (i as f64 + 0.5) / arrows as f64 * (hi - lo);
            let row = p.rows.iter().min_by(|a, b| (a.r - r).abs().total_cmp(&(b.r - r).abs()));
            let Some(row) = row else { break };
            if row.drift == 0.0 || !row.drift.is_finite() {
                continue;
            }
            let (x, y) = (sx(r), H / 2.0);
            let (dir, class) = if row.drift > 0.0 { (1.0, "arrow arrow-out") } else { (-1.0, "arrow arrow-in") };
            let _ = writeln!(
                s,
                r#"<path class="{class}" d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z" fill="grey"/>"#,
                x + 5.0 * dir,
                y,
                x - 5.0 * dir,
                y - 4.0,
                x - 5.0 * dir,
                y + 4.0
            );
        }
    }

    for z in &p.crossings.zeros {
        if z.r < lo || z.r > hi {
            continue;
        }
        let (class, label, colour) =
            if z.is_attractor() { ("attractor", "A", "rgb(26,150,65)") } else { ("repulsor", "R", "rgb(215,25,28)") };
        let x = sx(z.r);
        let _ = writeln!(
            s,
            r#"<g class="marker {class}" data-r="{}"><circle cx="{x:.2}" cy="{:.2}" r="6" fill="{colour}"/><text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{label}</text></g>"#,
            z.r,
            H / 2.0,
            H / 2.0 - 10.0
        );
    }
    s.push_str("</svg>\n");
    s
}
