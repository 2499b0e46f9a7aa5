//! Disk packings of triangulated disks: radii by angle-sum iteration, then
//! centers by breadth-first layout.
//!
//! Boundary (outer-face) vertices carry a prescribed radius. Each interior
//! radius is repeatedly replaced by the value that would make its angle sum
//! exactly `2π` if all its petals had equal radii; vertices are swept in
//! ascending id order, so results are deterministic.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use thiserror::Error;

use crate::patchwork::{Patchwork, PatchworkError, VertexRole};

pub const DEFAULT_PRECISION: f64 = 1e-4;
pub const MAX_SWEEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PackingError {
    #[error("radius iteration did not converge after {sweeps} sweeps (worst angle-sum residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("layout inconsistent at vertex {vertex}: placements differ by {discrepancy:e}")]
    LayoutInconsistent { vertex: usize, discrepancy: f64 },
    #[error("disks {a} and {b} overlap by {overlap:e}")]
    Overlap { a: usize, b: usize, overlap: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a triangulated disk: {0}")]
    NotTriangulated(String),
    #[error(transparent)]
    Patchwork(#[from] PatchworkError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub id: usize,
    pub center: [f64; 2],
    pub radius: f64,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskPacking {
    pub disks: Vec<Disk>,
    /// Worst interior angle-sum deviation from `2π` reached by the solver.
    pub achieved_residual: f64,
}

impl DiskPacking {
    pub fn disk(&self, id: usize) -> Option<&Disk> {
        self.disks.iter().find(|d| d.id == id)
    }

    /// Worst `| |c_i - c_j| - (r_i + r_j) |` over the given edges.
    pub fn tangency_residual(&self, edges: impl IntoIterator<Item = (usize, usize)>) -> f64 {
        let index: BTreeMap<usize, &Disk> = self.disks.iter().map(|d| (d.id, d)).collect();
        edges
            .into_iter()
            .filter_map(|(a, b)| Some((index.get(&a)?, index.get(&b)?)))
            .map(|(a, b)| (distance(a.center, b.center) - a.radius - b.radius).abs())
            .fold(0.0, f64::max)
    }
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Angle at the disk of radius `r` in the triangle of centers of three
/// mutually tangent disks.
pub fn tangent_angle(r: f64, ri: f64, rj: f64) -> f64 {
    let (a, b, c) = (r + ri, r + rj, ri + rj);
    ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
}

struct Flowers {
    /// Per vertex, the petal pairs `(i, j)` of its incident triangles.
    petals: Vec<Vec<(usize, usize)>>,
    interior: Vec<bool>,
}

fn flowers(tri: &Patchwork) -> Result<Flowers, PackingError> {
    if !tri.is_triangulated() {
        return Err(PackingError::NotTriangulated("a non-outer face is not a triangle".into()));
    }
    let n = tri.vertex_count();
    let mut petals = vec![Vec::new(); n];
    for [a, b, c] in tri.triangles() {
        petals[a].push((b, c));
        petals[b].push((c, a));
        petals[c].push((a, b));
    }
    let mut interior = vec![true; n];
    for &v in tri.outer_face() {
        interior[v] = false;
    }
    if !interior.iter().any(|&i| i) {
        return Err(PackingError::NotTriangulated("no interior vertices".into()));
    }
    Ok(Flowers { petals, interior })
}

fn angle_sum(petals: &[(usize, usize)], radii: &[f64], v: usize) -> f64 {
    petals.iter().map(|&(i, j)| tangent_angle(radii[v], radii[i], radii[j])).sum()
}

fn worst_residual(f: &Flowers, radii: &[f64]) -> f64 {
    (0..radii.len())
        .filter(|&v| f.interior[v])
        .map(|v| (angle_sum(&f.petals[v], radii, v) - 2.0 * PI).abs())
        .fold(0.0, f64::max)
}

/// Interior radii making every interior angle sum `2π` within `eps`; outer-face
/// vertices are held at `boundary_radius`. Returns radii indexed by vertex id.
pub fn solve_radii(tri: &Patchwork, boundary_radius: f64, eps: f64) -> Result<Vec<f64>, PackingError> {
    let (radii, _) = solve_radii_with_residual(tri, boundary_radius, eps)?;
    Ok(radii)
}

fn solve_radii_with_residual(
    tri: &Patchwork,
    boundary_radius: f64,
    eps: f64,
) -> Result<(Vec<f64>, f64), PackingError> {
    if !(boundary_radius > 0.0 && boundary_radius.is_finite()) {
        return Err(PackingError::InvalidParameter(format!("boundary radius {boundary_radius}")));
    }
    if !(eps > 0.0) {
        return Err(PackingError::InvalidParameter(format!("precision {eps}")));
    }
    let f = flowers(tri)?;
    let mut radii = vec![boundary_radius; tri.vertex_count()];
    let mut residual = worst_residual(&f, &radii);
    let mut sweeps = 0;
    while residual >= eps {
        if sweeps == MAX_SWEEPS {
            return Err(PackingError::NoConvergence { sweeps, residual });
        }
        for v in 0..radii.len() {
            if !f.interior[v] {
                continue;
            }
            let k = f.petals[v].len() as f64;
            let theta = angle_sum(&f.petals[v], &radii, v);
            let beta = (theta / (2.0 * k)).sin();
            let petal = radii[v] * beta / (1.0 - beta);
            let delta = (PI / k).sin();
            radii[v] = petal * (1.0 - delta) / delta;
        }
        sweeps += 1;
        residual = worst_residual(&f, &radii);
    }
    Ok((radii, residual))
}

/// Places centers by propagating across triangles: the first outer-face
/// vertex sits at the origin, the next on the positive x-axis, and each
/// further center is fixed by its two tangency distances, keeping every
/// triangle counterclockwise. `tol` bounds the disagreement between
/// independent placements of the same center.
pub fn layout(tri: &Patchwork, radii: &[f64], tol: f64) -> Result<DiskPacking, PackingError> {
    let triangles = tri.triangles();
    let n = tri.vertex_count();
    if radii.len() != n {
        return Err(PackingError::InvalidParameter(format!("{} radii for {n} vertices", radii.len())));
    }
    let mut by_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (t, &[a, b, c]) in triangles.iter().enumerate() {
        by_edge.insert((a, b), t);
        by_edge.insert((b, c), t);
        by_edge.insert((c, a), t);
    }
    let outer = tri.outer_face();
    let (u0, u1) = (outer[0], outer[1]);
    let mut centers: Vec<Option<[f64; 2]>> = vec![None; n];
    centers[u0] = Some([0.0, 0.0]);
    centers[u1] = Some([radii[u0] + radii[u1], 0.0]);
    // The interior triangle on edge u0-u1 traverses it as u1 -> u0.
    let seed = *by_edge
        .get(&(u1, u0))
        .ok_or_else(|| PackingError::NotTriangulated("outer edge without interior triangle".into()))?;

    let place = |p: [f64; 2], q: [f64; 2], rp: f64, rq: f64, rw: f64| -> [f64; 2] {
        let alpha = tangent_angle(rp, rq, rw);
        let base = (q[1] - p[1]).atan2(q[0] - p[0]) + alpha;
        let d = rp + rw;
        [p[0] + d * base.cos(), p[1] + d * base.sin()]
    };

    let mut done = vec![false; triangles.len()];
    let mut queue = VecDeque::from([seed]);
    done[seed] = true;
    while let Some(t) = queue.pop_front() {
        let tri_v = triangles[t];
        // Rotate so the two known vertices come first.
        let k = (0..3)
            .find(|&k| centers[tri_v[k]].is_some() && centers[tri_v[(k + 1) % 3]].is_some())
            .expect("queued triangles share a placed edge");
        let (a, b, w) = (tri_v[k], tri_v[(k + 1) % 3], tri_v[(k + 2) % 3]);
        let p = place(centers[a].unwrap(), centers[b].unwrap(), radii[a], radii[b], radii[w]);
        match centers[w] {
            None => centers[w] = Some(p),
            Some(existing) => {
                let discrepancy = distance(existing, p);
                if discrepancy > tol {
                    return Err(PackingError::LayoutInconsistent { vertex: w, discrepancy });
                }
            }
        }
        for (x, y) in [(a, b), (b, w), (w, a)] {
            if let Some(&next) = by_edge.get(&(y, x)) {
                if !done[next] {
                    done[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    let mut disks = Vec::with_capacity(n);
    for (id, c) in centers.iter().enumerate() {
        let center = c.ok_or_else(|| PackingError::NotTriangulated(format!("vertex {id} unreachable")))?;
        disks.push(Disk { id, center, radius: radii[id], boundary: outer.contains(&id) });
    }
    let packing = DiskPacking { disks, achieved_residual: 0.0 };
    // Every triangle edge must be tangent, not just the propagation tree.
    for &[a, b, c] in &triangles {
        for (x, y) in [(a, b), (b, c), (c, a)] {
            let (dx, dy) = (&packing.disks[x], &packing.disks[y]);
            let gap = (distance(dx.center, dy.center) - dx.radius - dy.radius).abs();
            if gap > tol {
                return Err(PackingError::LayoutInconsistent { vertex: y, discrepancy: gap });
            }
        }
    }
    Ok(packing)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackOptions {
    pub boundary_radius: f64,
    pub precision: f64,
}

impl Default for PackOptions {
    fn default() -> Self {
        PackOptions { boundary_radius: 1.0, precision: DEFAULT_PRECISION }
    }
}

/// Tolerance for tangency and separation checks derived from solver precision.
pub fn layout_tolerance(options: &PackOptions) -> f64 {
    10.0 * options.precision * options.boundary_radius
}

/// Smallest solver precision tried when the layout needs a tighter solve.
pub const PRECISION_FLOOR: f64 = 1e-13;

/// Triangulates, solves, lays out, and returns the disks of the original
/// (non-auxiliary) vertices only, after checking that they form a packing.
///
/// Radii errors compound along the layout, so when the placements disagree by
/// more than the tolerance the solve is repeated at a tenfold tighter
/// precision (never looser than requested) until the layout closes.
pub fn pack(patchwork: &Patchwork, options: &PackOptions) -> Result<DiskPacking, PackingError> {
    let tri = patchwork.triangulate()?;
    let tol = layout_tolerance(options);
    let mut eps = options.precision;
    let mut packing = loop {
        let (radii, residual) = solve_radii_with_residual(&tri, options.boundary_radius, eps)?;
        match layout(&tri, &radii, tol) {
            Ok(mut packing) => {
                packing.achieved_residual = residual;
                break packing;
            }
            Err(PackingError::LayoutInconsistent { .. }) if eps / 10.0 >= PRECISION_FLOOR => eps /= 10.0,
            Err(e) => return Err(e),
        }
    };
    packing.disks.retain(|d| tri.role(d.id) != VertexRole::Auxiliary);
    let disks = &packing.disks;
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let (a, b) = (&disks[i], &disks[j]);
            let overlap = a.radius + b.radius - distance(a.center, b.center);
            if overlap > tol {
                return Err(PackingError::Overlap { a: a.id, b: b.id, overlap });
            }
        }
    }
    Ok(packing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::patchwork::build_patchwork;

    fn descartes() -> Patchwork {
        // Boundary triangle 0,1,2 and interior vertex 3.
        let faces = vec![vec![3, 0, 1], vec![3, 1, 2], vec![3, 2, 0], vec![2, 1, 0]];
        Patchwork::from_faces_with_outer(vec![VertexRole::Medial; 4], faces, 3).unwrap()
    }

    fn flower(k: usize) -> Patchwork {
        let mut faces: Vec<Vec<usize>> = (1..=k).map(|i| vec![0, i, i % k + 1]).collect();
        faces.push((1..=k).rev().collect());
        Patchwork::from_faces(vec![VertexRole::Medial; k + 1], faces).unwrap()
    }

    #[test]
    fn descartes_interior_radius() {
        let r = solve_radii(&descartes(), 1.0, 1e-12).unwrap();
        let expected = 1.0 / (3.0 + 2.0 * 3f64.sqrt());
        assert!((r[3] - expected).abs() < 1e-9, "{} vs {expected}", r[3]);
        assert!(r[..3].iter().all(|&x| x == 1.0));
    }

    #[test]
    fn descartes_layout_is_symmetric() {
        let tri = descartes();
        let r = solve_radii(&tri, 1.0, 1e-12).unwrap();
        let p = layout(&tri, &r, 1e-9).unwrap();
        let inner = &p.disks[3];
        for d in &p.disks[..3] {
            assert!((distance(d.center, inner.center) - (1.0 + inner.radius)).abs() < 1e-9);
        }
    }

    #[test]
    fn hexagonal_flower_has_unit_center() {
        let r = solve_radii(&flower(6), 1.0, 1e-12).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn seeding_rule() {
        let tri = flower(6);
        let r = solve_radii(&tri, 1.0, 1e-12).unwrap();
        let p = layout(&tri, &r, 1e-9).unwrap();
        let outer = tri.outer_face();
        assert_eq!(p.disks[outer[0]].center, [0.0, 0.0]);
        assert!((p.disks[outer[1]].center[0] - 2.0).abs() < 1e-12);
        assert_eq!(p.disks[outer[1]].center[1], 0.0);
    }

    #[test]
    fn angle_sums_converge_on_patchworks() {
        for pd in ["X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)", "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"] {
            let tri = build_patchwork(&parse_pd(pd).unwrap()).unwrap().triangulate().unwrap();
            let r = solve_radii(&tri, 1.0, 1e-4).unwrap();
            let f = flowers(&tri).unwrap();
            assert!(worst_residual(&f, &r) < 1e-4);
        }
    }

    #[test]
    fn trefoil_tangencies() {
        let p = build_patchwork(&parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()).unwrap();
        let packing = pack(&p, &PackOptions::default()).unwrap();
        assert_eq!(packing.disks.len(), 9);
        assert_eq!(p.edges().count(), 21);
        assert!(packing.tangency_residual(p.edges()) < 1e-3);
    }

    #[test]
    fn hopf_packing_is_octahedral() {
        let p = build_patchwork(&parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap()).unwrap();
        let packing = pack(&p, &PackOptions { boundary_radius: 1.0, precision: 1e-10 }).unwrap();
        assert_eq!(packing.disks.len(), 6);
        for a in &packing.disks {
            for b in &packing.disks {
                if a.id < b.id {
                    let gap = distance(a.center, b.center) - a.radius - b.radius;
                    assert_eq!(gap.abs() < 1e-6, p.has_edge(a.id, b.id), "{} {} gap {gap}", a.id, b.id);
                }
            }
        }
    }

    #[test]
    fn scaling_boundary_scales_solution() {
        let p = build_patchwork(&parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap()).unwrap();
        let a = pack(&p, &PackOptions { boundary_radius: 1.0, precision: 1e-10 }).unwrap();
        let b = pack(&p, &PackOptions { boundary_radius: 3.0, precision: 1e-10 }).unwrap();
        for (x, y) in a.disks.iter().zip(&b.disks) {
            assert!((3.0 * x.radius - y.radius).abs() <= 1e-9 * y.radius);
            for k in 0..2 {
                assert!((3.0 * x.center[k] - y.center[k]).abs() <= 1e-9 * 3.0);
            }
        }
    }

    #[test]
    fn deterministic() {
        let p = build_patchwork(&parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap()).unwrap();
        assert_eq!(pack(&p, &PackOptions::default()).unwrap(), pack(&p, &PackOptions::default()).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(solve_radii(&descartes(), 0.0, 1e-4), Err(PackingError::InvalidParameter(_))));
        assert!(matches!(solve_radii(&descartes(), 1.0, 0.0), Err(PackingError::InvalidParameter(_))));
    }
}
