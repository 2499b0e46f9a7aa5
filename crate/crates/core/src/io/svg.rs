//! SVG drawing of the planar disk packing with its tangency (carrier) edges.

use std::fmt::Write as _;

use super::NecklaceDocument;
use crate::circlepack::DiskPacking;

/// A disk to draw: id, center, radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgDisk {
    pub id: usize,
    pub center: [f64; 2],
    pub radius: f64,
}

/// Relative gap below which two drawn disks count as tangent.
const TANGENT: f64 = 1e-3;

/// Draws the in-plane balls of a document (medial and crossing-center balls,
/// i.e. the blown-up disk packing) and the segments joining tangent centers.
pub fn export_svg(doc: &NecklaceDocument) -> String {
    let disks: Vec<SvgDisk> = doc
        .balls
        .iter()
        .filter(|b| b.role != "bridge")
        .map(|b| SvgDisk { id: b.id, center: [b.x, b.y], radius: b.r })
        .collect();
    let mut edges = Vec::new();
    for (i, a) in disks.iter().enumerate() {
        for b in &disks[i + 1..] {
            let d = (a.center[0] - b.center[0]).hypot(a.center[1] - b.center[1]);
            if (d - a.radius - b.radius).abs() <= TANGENT * a.radius.min(b.radius) {
                edges.push((a.id, b.id));
            }
        }
    }
    render(&disks, &edges)
}

/// Draws a disk packing with the given carrier edges.
pub fn packing_svg(packing: &DiskPacking, edges: &[(usize, usize)]) -> String {
    let disks: Vec<SvgDisk> =
        packing.disks.iter().map(|d| SvgDisk { id: d.id, center: d.center, radius: d.radius }).collect();
    render(&disks, edges)
}

fn render(disks: &[SvgDisk], edges: &[(usize, usize)]) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for d in disks {
        // SVG's y axis points down; drawing uses (x, -y).
        let c = [d.center[0], -d.center[1]];
        for k in 0..2 {
            lo[k] = lo[k].min(c[k] - d.radius);
            hi[k] = hi[k].max(c[k] + d.radius);
        }
    }
    if disks.is_empty() {
        (lo, hi) = ([0.0; 2], [1.0; 2]);
    }
    let (w, h) = (hi[0] - lo[0], hi[1] - lo[1]);
    let margin = 0.05 * w.max(h);
    let stroke = 0.002 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        lo[0] - margin,
        lo[1] - margin,
        w + 2.0 * margin,
        h + 2.0 * margin
    );
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="{stroke}">"#);
    for d in disks {
        let _ = writeln!(
            out,
            r#"<circle id="disk{}" cx="{}" cy="{}" r="{}"/>"#,
            d.id, d.center[0], -d.center[1], d.radius
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g stroke="red" stroke-width="{stroke}">"#);
    let find = |id: usize| disks.iter().find(|d| d.id == id);
    for &(i, j) in edges {
        if let (Some(a), Some(b)) = (find(i), find(j)) {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                a.center[0], -a.center[1], b.center[0], -b.center[1]
            );
        }
    }
    let _ = writeln!(out, "</g>\n</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circlepack::Disk;

    #[test]
    fn view_box_has_five_percent_margin() {
        let packing = DiskPacking {
            disks: vec![
                Disk { id: 0, center: [0.0, 0.0], radius: 1.0, boundary: true },
                Disk { id: 1, center: [2.0, 0.0], radius: 1.0, boundary: true },
            ],
            achieved_residual: 0.0,
        };
        let svg = packing_svg(&packing, &[(0, 1)]);
        assert!(svg.contains(r#"viewBox="-1.2 -1.2 4.4 2.4""#), "{svg}");
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<line").count(), 1);
    }
}
