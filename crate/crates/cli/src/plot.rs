//! SVG drawings of planar instances.

use std::fmt::Write;

use anyhow::{bail, Result};

use crate::instance::{parse_scalar, CertificateJson, InstanceFile, Sense};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;

type P2 = [f64; 2];

fn hull(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Clips a polygon to `<a, x> <= b`.
fn clip(poly: &[P2], a: P2, b: f64) -> Vec<P2> {
    let val = |p: P2| a[0] * p[0] + a[1] * p[1] - b;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (vp, vq) = (val(p), val(q));
        if vp <= 0.0 {
            out.push(p);
        }
        if (vp < 0.0) != (vq < 0.0) && vp != vq {
            let t = vp / (vp - vq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn f(s: &str) -> f64 {
    parse_scalar::<acit_core::Float>(s).map(|v| v.0).unwrap_or(f64::NAN)
}

/// Draws `conv(P)`, the clipped halfspace intersection and, if given, the certificate.
pub fn render_svg(inst: &InstanceFile, cert: Option<&CertificateJson>) -> Result<String> {
    if inst.d != 2 {
        bail!("plotting needs d = 2, got {}", inst.d);
    }
    let pts: Vec<P2> = inst.points.iter().map(|p| [f(&p[0]), f(&p[1])]).collect();
    let mut extra: Vec<P2> = Vec::new();
    match cert {
        Some(CertificateJson::Witness { point, .. }) => extra.push([f(&point[0]), f(&point[1])]),
        Some(CertificateJson::Separator { x, y, .. }) => {
            extra.push([f(&x[0]), f(&x[1])]);
            extra.push([f(&y[0]), f(&y[1])]);
        }
        _ => {}
    }
    let all: Vec<P2> = pts.iter().chain(&extra).copied().collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.5 * span + 1.0;
    let (lo, hi) = ([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad]);
    let scale = (SIZE - 2.0 * MARGIN) / (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let map = |p: P2| [MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale];
    let path = |poly: &[P2]| -> String {
        poly.iter().map(|&p| map(p)).map(|q| format!("{:.2},{:.2}", q[0], q[1])).collect::<Vec<_>>().join(" ")
    };

    let mut region = vec![[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
    for h in &inst.halfspaces {
        let (mut a, mut b) = ([f(&h.normal[0]), f(&h.normal[1])], f(&h.offset));
        if h.sense == Sense::Geq {
            a = [-a[0], -a[1]];
            b = -b;
        }
        region = clip(&region, a, b);
    }

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )?;
    writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##)?;
    if region.len() >= 3 {
        writeln!(svg, r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.5" stroke="#3182bd"/>"##, path(&region))?;
    }
    let ph = hull(pts.clone());
    if ph.len() >= 3 {
        writeln!(svg, r##"<polygon points="{}" fill="#fdae6b" fill-opacity="0.5" stroke="#e6550d"/>"##, path(&ph))?;
    } else if ph.len() == 2 {
        writeln!(svg, r##"<polyline points="{}" stroke="#e6550d"/>"##, path(&ph))?;
    }
    for p in &pts {
        let q = map(*p);
        writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#e6550d"/>"##, q[0], q[1])?;
    }
    match cert {
        Some(CertificateJson::Witness { point, .. }) => {
            let q = map([f(&point[0]), f(&point[1])]);
            writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="5" fill="#31a354" stroke="#000000"/>"##, q[0], q[1])?;
        }
        Some(CertificateJson::Separator { normal, offset, x, y, .. }) => {
            let (n, c) = ([f(&normal[0]), f(&normal[1])], f(offset));
            let frame = [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
            // The separator line is the boundary of one clipped half of the frame.
            let half = clip(&frame, n, c);
            let on: Vec<P2> = half.into_iter().filter(|p| (n[0] * p[0] + n[1] * p[1] - c).abs() < 1e-9 * (1.0 + c.abs())).collect();
            if on.len() >= 2 {
                writeln!(svg, r##"<polyline points="{}" stroke="#000000" stroke-dasharray="6,4"/>"##, path(&on[..2]))?;
            }
            let (px, py) = ([f(&x[0]), f(&x[1])], [f(&y[0]), f(&y[1])]);
            writeln!(svg, r##"<polyline points="{}" stroke="#756bb1" stroke-width="2"/>"##, path(&[px, py]))?;
            for p in [px, py] {
                let q = map(p);
                writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#756bb1"/>"##, q[0], q[1])?;
            }
        }
        _ => {}
    }
    writeln!(svg, "</svg>")?;
    Ok(svg)
}
