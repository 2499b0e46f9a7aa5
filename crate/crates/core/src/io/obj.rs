//! Wavefront OBJ: a UV sphere per ball and a closed polyline per thread.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{float, IoError, NecklaceDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjOptions {
    /// Segments around each sphere's axis.
    pub segments: usize,
    /// Rings from pole to pole.
    pub rings: usize,
}

impl Default for ObjOptions {
    fn default() -> Self {
        ObjOptions { segments: 24, rings: 12 }
    }
}

pub fn export_obj(doc: &NecklaceDocument, options: &ObjOptions) -> Result<String, IoError> {
    let (segs, rings) = (options.segments, options.rings);
    if segs < 3 || rings < 2 {
        return Err(IoError::UnsupportedFormat(format!("sphere resolution {segs}x{rings} is too coarse")));
    }
    let mut out = String::from("# necklace representation: one sphere per ball, one polyline per thread\n");
    let mut next = 1usize; // OBJ indices are 1-based
    for b in &doc.balls {
        let _ = writeln!(out, "o ball_{}_{}", b.id, b.role);
        let vertex = |out: &mut String, theta: f64, phi: f64| {
            let (x, y, z) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let _ = writeln!(out, "v {} {} {}", float(b.x + b.r * x), float(b.y + b.r * y), float(b.z + b.r * z));
        };
        vertex(&mut out, 0.0, 0.0);
        for i in 1..rings {
            for j in 0..segs {
                vertex(&mut out, PI * i as f64 / rings as f64, 2.0 * PI * j as f64 / segs as f64);
            }
        }
        vertex(&mut out, PI, 0.0);
        let (top, bottom) = (next, next + 1 + (rings - 1) * segs);
        let ring = |i: usize, j: usize| next + 1 + (i - 1) * segs + j % segs;
        for j in 0..segs {
            let _ = writeln!(out, "f {} {} {}", top, ring(1, j), ring(1, j + 1));
        }
        for i in 1..rings - 1 {
            for j in 0..segs {
                let _ = writeln!(out, "f {} {} {} {}", ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), ring(i, j + 1));
            }
        }
        for j in 0..segs {
            let _ = writeln!(out, "f {} {} {}", ring(rings - 1, j), bottom, ring(rings - 1, j + 1));
        }
        next = bottom + 1;
    }
    for (k, thread) in doc.threads.iter().enumerate() {
        let _ = writeln!(out, "o thread_{k}");
        for &id in thread {
            let b = &doc.balls[id];
            let _ = writeln!(out, "v {} {} {}", float(b.x), float(b.y), float(b.z));
        }
        let ids: Vec<String> = (0..thread.len()).map(|i| (next + i).to_string()).chain([next.to_string()]).collect();
        let _ = writeln!(out, "l {}", ids.join(" "));
        next += thread.len();
    }
    Ok(out)
}
