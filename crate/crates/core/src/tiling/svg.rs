//! Standalone SVG 1.1 drawings of a tiling.

use std::fmt::Write;

use super::{check_modulus, fundamental_representatives, TilingError};
use crate::gaussian::GaussInt;
use crate::quotient_ring::{PointOrdering, QuotientRing};
use crate::quotient_scheme::quotient;
use crate::scheme::build_scheme;

pub const MAX_RENDER_NORM: i64 = 10_000;
/// Largest accepted half-width of the drawing window, in lattice units.
pub const MAX_WINDOW: i64 = 300;

// styling, in pixels
const UNIT: i64 = 24;
const MARGIN: i64 = 24;
const POINT_RADIUS: i64 = 3;
const REP_RADIUS: i64 = 5;
const LATTICE_RADIUS: i64 = 8;
const FONT_SIZE: i64 = 10;
const INK: &str = "#222222";
const FAINT: &str = "#9a9a9a";
const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelMode {
    #[default]
    None,
    /// Residue index in coordinate order.
    Index,
    /// Integer label 0..p-1; the filled points become the smallest-norm
    /// carrier. Needs a cyclic quotient.
    Gfp,
}

#[derive(Debug, Clone, Default)]
pub struct SvgOptions {
    /// Half-width of the window; by default the fundamental region plus one.
    pub window: Option<i64>,
    pub labels: LabelMode,
    /// Fill representatives by scheme class.
    pub orbit_colors: bool,
    /// Fill representatives by quotient point class for this closed class
    /// set of the coordinate-order scheme.
    pub quotient_grouping: Option<Vec<usize>>,
}

pub fn render_svg(alpha: GaussInt, options: &SvgOptions) -> Result<String, TilingError> {
    check_modulus(alpha)?;
    let norm = alpha.norm();
    if norm > MAX_RENDER_NORM {
        return Err(TilingError::RenderCap { norm, cap: MAX_RENDER_NORM });
    }
    let b = GaussInt::new(alpha.im, -alpha.re);
    let corners = [GaussInt::new(0, 0), alpha, alpha + b, b];
    let w = options
        .window
        .unwrap_or_else(|| corners.iter().map(|c| c.re.abs().max(c.im.abs())).max().unwrap() + 1);
    if !(1..=MAX_WINDOW).contains(&w) {
        return Err(TilingError::Window { window: w, cap: MAX_WINDOW });
    }

    let ring = QuotientRing::build(alpha)?;
    let reps = match options.labels {
        LabelMode::Gfp => ring.residues().iter().map(|r| r.rep).collect(),
        _ => fundamental_representatives(alpha)?,
    };
    let gfp_label = match options.labels {
        LabelMode::Gfp => {
            let order = ring.ordering(PointOrdering::Gfp)?;
            let mut label = vec![0; ring.order()];
            for (g, &idx) in order.iter().enumerate() {
                label[idx] = g;
            }
            Some(label)
        }
        _ => None,
    };
    let group: Option<Vec<usize>> = if let Some(zero_tilde) = &options.quotient_grouping {
        let scheme = build_scheme(ring.clone())?;
        let q = quotient(scheme.scheme(), zero_tilde)?;
        Some((0..ring.order()).map(|x| q.point_class_of(x)).collect())
    } else if options.orbit_colors {
        let scheme = build_scheme(ring.clone())?;
        Some((0..ring.order()).map(|x| scheme.class_of_index(x)).collect())
    } else {
        None
    };

    let size = 2 * w * UNIT + 2 * MARGIN;
    let px = |z: GaussInt| (MARGIN + (z.re + w) * UNIT, MARGIN + (w - z.im) * UNIT);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, "<title>Z[i]/({alpha})</title>");
    let _ = writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#);

    let (ox, oy) = px(GaussInt::new(0, 0));
    let _ = writeln!(
        out,
        r#"<g stroke="{FAINT}" stroke-dasharray="2,3"><line x1="{MARGIN}" y1="{oy}" x2="{}" y2="{oy}"/><line x1="{ox}" y1="{MARGIN}" x2="{ox}" y2="{}"/></g>"#,
        size - MARGIN,
        size - MARGIN
    );

    let region: Vec<String> = corners.iter().map(|&c| px(c)).map(|(x, y)| format!("{x},{y}")).collect();
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="{INK}" stroke-dasharray="4,3"/>"#,
        region.join(" ")
    );
    for (v, name) in [(alpha, alpha.to_string()), (b, (alpha * GaussInt::new(0, -1)).to_string())] {
        let (x, y) = px(v);
        let _ = writeln!(out, r#"<line x1="{ox}" y1="{oy}" x2="{x}" y2="{y}" stroke="{INK}"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="{FONT_SIZE}" fill="{INK}">{name}</text>"#, x + 4, y - 4);
    }

    let _ = writeln!(out, r#"<g fill="none" stroke="{FAINT}">"#);
    for im in (-w..=w).rev() {
        for re in -w..=w {
            let (x, y) = px(GaussInt::new(re, im));
            let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{POINT_RADIUS}"/>"#);
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g fill="none" stroke="{INK}">"#);
    for im in (-w..=w).rev() {
        for re in -w..=w {
            let z = GaussInt::new(re, im);
            if z.divisible_by(alpha) {
                let (x, y) = px(z);
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{LATTICE_RADIUS}"/>"#);
            }
        }
    }
    let _ = writeln!(out, "</g>");

    for &z in &reps {
        if z.re.abs() > w || z.im.abs() > w {
            continue;
        }
        let idx = ring.index_of(z);
        let fill = group.as_ref().map_or(INK, |g| PALETTE[g[idx] % PALETTE.len()]);
        let (x, y) = px(z);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{REP_RADIUS}" fill="{fill}"/>"#);
        let label = match (&options.labels, &gfp_label) {
            (LabelMode::Gfp, Some(l)) => Some(l[idx]),
            (LabelMode::Index, _) => Some(idx),
            _ => None,
        };
        if let Some(l) = label {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="{FONT_SIZE}" fill="{INK}">{l}</text>"#,
                x + REP_RADIUS,
                y - REP_RADIUS
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
