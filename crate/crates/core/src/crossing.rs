//! Per-crossing geometry: the pyramid of five balls around a crossing, its
//! standard curvature and closest pair, the tangency ball, and the two bridge
//! balls that carry one strand over or under the other.
//!
//! Pyramid labels follow the diagram slots: `1 = a`, `2 = b`, `-1 = c`,
//! `-2 = d`, so `(1, -1)` is the under-strand pair and `(2, -2)` the
//! over-strand pair; the medial labels run counterclockwise `1, 2, -1, -2`.

use nalgebra::{Matrix5, Vector5};
use thiserror::Error;

use crate::circlepack::DiskPacking;
use crate::inversive::{
    blow_up, encode, flatten, lorentz, point_vector, product, standard_transform, InversiveCoords, InversiveError,
    Shape, Similarity,
};
use crate::patchwork::Patchwork;

/// Smallest |det B| accepted for the bridge-ball basis.
pub const SINGULAR_BASIS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossingError {
    #[error("crossing {crossing}: pyramid star broken: {detail}")]
    BadStar { crossing: usize, detail: String },
    #[error("opposite-pair product {lambda} outside the pyramidal range (-7, -1)")]
    DegeneratePacking { lambda: f64 },
    #[error("crossing {crossing}: tangency points are collinear or coincident")]
    CollinearTangencyPoints { crossing: usize },
    #[error("crossing {crossing}: bridge basis is singular (det {det:e})")]
    SingularBasis { crossing: usize, det: f64 },
    #[error("crossing {crossing}: bridge ball leaves the crossing region: {detail}")]
    RegionViolation { crossing: usize, detail: String },
    #[error("crossing {crossing}: {source}")]
    Inversive { crossing: usize, source: InversiveError },
}

/// Pyramid label → index into [`PyramidalSystem::balls`] (`x` is label 0).
pub fn label_index(label: i8) -> usize {
    match label {
        0 => 0,
        1 => 1,
        2 => 2,
        -1 => 3,
        -2 => 4,
        _ => panic!("invalid pyramid label {label}"),
    }
}

/// Labels in storage order.
pub const LABELS: [i8; 5] = [0, 1, 2, -1, -2];

/// Standard curvature of an opposite pair with product `lambda`, and whether
/// that pair is the closest one. With `lambda >= -3` the pair itself has the
/// smaller standard curvature `(1 - lambda) / 2`; otherwise the other pair
/// does, with `8 / (1 - lambda)`. The result always lies in `(1, 2]`.
pub fn standard_curvature(lambda: f64) -> Result<(f64, bool), CrossingError> {
    if !(lambda > -7.0 && lambda < -1.0) {
        return Err(CrossingError::DegeneratePacking { lambda });
    }
    Ok(if lambda >= -3.0 { ((1.0 - lambda) / 2.0, true) } else { (8.0 / (1.0 - lambda), false) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PyramidalSystem {
    pub crossing: usize,
    /// Ball ids in label order `x, 1, 2, -1, -2`.
    pub ids: [usize; 5],
    /// Balls (dimension 3) in label order `x, 1, 2, -1, -2`.
    pub balls: [InversiveCoords; 5],
    /// `lambda[0] = <b1, b-1>`, `lambda[1] = <b2, b-2>`.
    pub lambda: [f64; 2],
    /// The smaller standard curvature, in `(1, 2]`.
    pub kappa: f64,
    /// Label of the closest pair: 1 or 2.
    pub closest: i8,
    /// Ball through the four adjacent-pair tangency points, containing `b_x`.
    pub tangency: InversiveCoords,
    /// Relative distance of the fourth tangency point from the tangency circle.
    pub tangency_residual: f64,
}

impl PyramidalSystem {
    /// Validates a labeled pyramid; `tol` bounds the tangency residuals.
    pub fn from_balls(
        crossing: usize,
        ids: [usize; 5],
        balls: [InversiveCoords; 5],
        tol: f64,
    ) -> Result<Self, CrossingError> {
        let inv = |source| CrossingError::Inversive { crossing, source };
        let prod = |a: i8, b: i8| product(&balls[label_index(a)], &balls[label_index(b)]).map_err(inv);
        if balls.iter().any(|b| b.dim() != 3) {
            return Err(CrossingError::BadStar { crossing, detail: "pyramid balls must be 3-dimensional".into() });
        }
        let adjacent = [(0, 1), (0, 2), (0, -1), (0, -2), (1, 2), (2, -1), (-1, -2), (-2, 1)];
        for (a, b) in adjacent {
            let p = prod(a, b)?;
            if (p + 1.0).abs() > tol {
                return Err(CrossingError::BadStar { crossing, detail: format!("<b{a}, b{b}> = {p}, expected -1") });
            }
        }
        let lambda = [prod(1, -1)?, prod(2, -2)?];
        for (i, &l) in lambda.iter().enumerate() {
            if !(l < -1.0) {
                return Err(CrossingError::BadStar {
                    crossing,
                    detail: format!("opposite pair {} not disjoint (product {l})", i + 1),
                });
            }
        }
        let (kappa, first) = standard_curvature(lambda[0])?;
        let (tangency, tangency_residual) = tangency_ball(crossing, &balls)?;
        Ok(PyramidalSystem {
            crossing,
            ids,
            balls,
            lambda,
            kappa,
            closest: if first { 1 } else { 2 },
            tangency,
            tangency_residual,
        })
    }

    pub fn ball(&self, label: i8) -> &InversiveCoords {
        &self.balls[label_index(label)]
    }

    pub fn id(&self, label: i8) -> usize {
        self.ids[label_index(label)]
    }

    /// Standard curvatures `((1 - lambda_i) / 2)` of both pairs.
    pub fn standard_curvatures(&self) -> [f64; 2] {
        [(1.0 - self.lambda[0]) / 2.0, (1.0 - self.lambda[1]) / 2.0]
    }
}

/// Labels the pyramid of crossing `x` from a packing of the patchwork.
pub fn label_pyramid(
    patchwork: &Patchwork,
    x: usize,
    packing: &DiskPacking,
    tol: f64,
) -> Result<PyramidalSystem, CrossingError> {
    let [a, b, c, d] = patchwork.crossing_star(x);
    let ids = [x, a, b, c, d];
    let mut balls = Vec::with_capacity(5);
    for id in ids {
        let disk = packing
            .disk(id)
            .ok_or_else(|| CrossingError::BadStar { crossing: x, detail: format!("no disk for vertex {id}") })?;
        let coords = encode(&Shape::Solid { center: disk.center.to_vec(), radius: disk.radius })
            .and_then(|c| blow_up(&c))
            .map_err(|source| CrossingError::Inversive { crossing: x, source })?;
        balls.push(coords);
    }
    PyramidalSystem::from_balls(x, ids, balls.try_into().expect("five balls"), tol)
}

/// Contact point of two (nearly) externally tangent disks or balls.
fn contact_point(a: &InversiveCoords, b: &InversiveCoords) -> Vec<f64> {
    let d = a.dim();
    let w: Vec<f64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x + y).collect();
    let k = w[d + 1] - w[d];
    w[..d].iter().map(|x| x / k).collect()
}

/// Vector Lorentz-orthogonal to three vectors of `R^4` (generalized cross product
/// followed by `Q`).
fn lorentz_orthogonal(rows: [&[f64]; 3]) -> [f64; 4] {
    let mut w = [0.0; 4];
    for (j, slot) in w.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let m = |r: usize, c: usize| rows[r][cols[c]];
        let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        *slot = if j % 2 == 0 { det } else { -det };
    }
    w[3] = -w[3];
    w
}

/// The tangency ball of a labeled pyramid and the relative residual of the
/// fourth tangency point.
pub fn tangency_ball(crossing: usize, balls: &[InversiveCoords; 5]) -> Result<(InversiveCoords, f64), CrossingError> {
    let inv = |source| CrossingError::Inversive { crossing, source };
    let flat: Vec<InversiveCoords> = balls.iter().map(flatten).collect::<Result<_, _>>().map_err(inv)?;
    let disk = |l: i8| &flat[label_index(l)];
    let points = [
        contact_point(disk(1), disk(2)),
        contact_point(disk(1), disk(-2)),
        contact_point(disk(-1), disk(2)),
    ];
    let nulls: Vec<Vec<f64>> = points.iter().map(|p| point_vector(p)).collect();
    let t = lorentz_orthogonal([&nulls[0], &nulls[1], &nulls[2]]);
    let scale = t.iter().map(|x| x * x).sum::<f64>();
    let norm = lorentz(&t, &t);
    let collinear = CrossingError::CollinearTangencyPoints { crossing };
    if !(norm > 1e-20 * scale) {
        return Err(collinear);
    }
    let sign = if lorentz(&t, disk(0).as_slice()) < 0.0 { -1.0 } else { 1.0 };
    let raw: Vec<f64> = t.iter().map(|x| sign * x / norm.sqrt()).collect();
    let coords = InversiveCoords::from_raw(2, &raw).map_err(inv)?;
    if coords.curvature().abs() < 1e-10 {
        return Err(collinear);
    }
    let k = coords.curvature();
    let center = [raw[0] / k, raw[1] / k];
    let radius = 1.0 / k.abs();
    let fourth = contact_point(disk(-1), disk(-2));
    let residual = ((fourth[0] - center[0]).hypot(fourth[1] - center[1]) - radius).abs() / radius;
    Ok((blow_up(&coords).map_err(inv)?, residual))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BridgeBalls {
    /// Tangent to `b_c`.
    pub b3: InversiveCoords,
    /// Tangent to `b_{-c}` and to `b3`.
    pub b3_prime: InversiveCoords,
    /// Columns `b_x | b_c | b_f | b_{-c} | b_z`.
    pub basis: Matrix5<f64>,
    pub lambda_neg_c3: f64,
    pub lambda_z3: f64,
    /// Largest `|<u,u> - 1|` of the solved vectors before normalization.
    pub normalization_drift: f64,
}

/// Target products of the bridge balls: `(-1 - 2 sqrt k, sqrt(3 + 2 sqrt k - k))`.
pub fn bridge_parameters(kappa: f64) -> (f64, f64) {
    let s = kappa.sqrt();
    (-1.0 - 2.0 * s, (3.0 + 2.0 * s - kappa).sqrt())
}

/// Closed form of `<b_t, b3>`.
pub fn expected_tangency_product(kappa: f64) -> f64 {
    (2.0 + 2.0 * kappa.sqrt() - kappa) / (4.0 + kappa * kappa).sqrt()
}

/// Closed form of `<b_{-f}, b3'>`.
pub fn expected_far_product(kappa: f64) -> f64 {
    3.0 - 4.0 / kappa.sqrt() - 8.0 / kappa
}

/// Solves the two bridge balls from their prescribed products with the basis
/// `b_x | b_c | b_f | b_{-c} | b_z` (`b_z` the half-space `z >= 0`). They lie
/// above the base plane when `is_over`, below otherwise. `tol` bounds the
/// crossing-region containment checks.
pub fn bridge_balls(system: &PyramidalSystem, is_over: bool, tol: f64) -> Result<BridgeBalls, CrossingError> {
    let crossing = system.crossing;
    let inv = |source| CrossingError::Inversive { crossing, source };
    let c = system.closest;
    let f = 3 - c;
    let col = |b: &InversiveCoords| Vector5::from_column_slice(b.as_slice());
    let bz = Vector5::new(0.0, 0.0, 1.0, 0.0, 0.0);
    let basis = Matrix5::from_columns(&[
        col(system.ball(0)),
        col(system.ball(c)),
        col(system.ball(f)),
        col(system.ball(-c)),
        bz,
    ]);
    let det = basis.determinant();
    if !(det.abs() >= SINGULAR_BASIS) {
        return Err(CrossingError::SingularBasis { crossing, det });
    }
    let (lc, lz) = bridge_parameters(system.kappa);
    let lu = basis.transpose().lu();
    let mut drift: f64 = 0.0;
    let mut solve = |row: [f64; 5]| -> Result<InversiveCoords, CrossingError> {
        let w = lu.solve(&Vector5::from(row)).ok_or(CrossingError::SingularBasis { crossing, det })?;
        let mut u: Vec<f64> = w.iter().copied().collect();
        u[4] = -u[4];
        let norm = lorentz(&u, &u);
        drift = drift.max((norm - 1.0).abs());
        if !(norm > 0.0) {
            return Err(inv(InversiveError::Unnormalized(norm)));
        }
        u.iter_mut().for_each(|x| *x /= norm.sqrt());
        let ball = InversiveCoords::from_raw(3, &u).map_err(inv)?;
        Ok(if is_over { ball } else { ball.mirror_last_axis() })
    };
    let b3 = solve([-1.0, -1.0, -1.0, lc, lz])?;
    let b3_prime = solve([-1.0, lc, -1.0, -1.0, lz])?;

    for (name, ball) in [("b3", &b3), ("b3'", &b3_prime)] {
        for (label, pyramid) in LABELS.iter().zip(&system.balls) {
            let p = product(ball, pyramid).map_err(inv)?;
            if p > -1.0 + tol {
                return Err(CrossingError::RegionViolation {
                    crossing,
                    detail: format!("<{name}, b{label}> = {p} overlaps the pyramid"),
                });
            }
        }
        let pt = product(ball, &system.tangency).map_err(inv)?;
        if pt < 1.0 - tol {
            return Err(CrossingError::RegionViolation {
                crossing,
                detail: format!("<{name}, b_t> = {pt} leaves the tangency ball"),
            });
        }
    }
    Ok(BridgeBalls { b3, b3_prime, basis, lambda_neg_c3: lc, lambda_z3: lz, normalization_drift: drift })
}

/// The pyramid as disks in standard position for the pair `(-1, x)`: `d_{-1}`
/// becomes `y >= 1`, `d_x` becomes `y <= -1`, `d_1` is centered on the y-axis
/// and `d_2` lies to its right. Order: `x, 1, 2, -1, -2, t`.
pub fn standard_form(system: &PyramidalSystem) -> Result<[InversiveCoords; 6], CrossingError> {
    let crossing = system.crossing;
    let inv = |source| CrossingError::Inversive { crossing, source };
    let mut disks: Vec<InversiveCoords> = system.balls.iter().map(flatten).collect::<Result<_, _>>().map_err(inv)?;
    disks.push(flatten(&system.tangency).map_err(inv)?);
    let mut out = standard_transform(&disks, label_index(-1), label_index(0)).map_err(inv)?;
    let center = |b: &InversiveCoords| {
        let v = b.as_slice();
        let k = b.curvature();
        [v[0] / k, v[1] / k]
    };
    let shift = Similarity { scale: 1.0, rotation: vec![vec![1.0, 0.0], vec![0.0, 1.0]], translation: vec![
        -center(&out[label_index(1)])[0],
        0.0,
    ] };
    out = out.iter().map(|b| shift.apply(b)).collect::<Result<_, _>>().map_err(inv)?;
    if center(&out[label_index(2)])[0] < 0.0 {
        let mirror =
            Similarity { scale: 1.0, rotation: vec![vec![-1.0, 0.0], vec![0.0, 1.0]], translation: vec![0.0, 0.0] };
        out = out.iter().map(|b| mirror.apply(b)).collect::<Result<_, _>>().map_err(inv)?;
    }
    Ok(out.try_into().expect("six disks"))
}

/// Closed-form standard pyramid with parameter `k1`, order `x, 1, 2, -1, -2, t`.
pub fn standard_pyramid(k1: f64) -> [InversiveCoords; 6] {
    let s = k1.sqrt();
    let h = (k1 * k1 + 4.0).sqrt();
    let rows: [[f64; 4]; 6] = [
        [0.0, -1.0, 1.0, 1.0],
        [0.0, 1.0 - k1, -1.0, k1 - 1.0],
        [2.0 / s, 0.0, 2.0 / k1 - 1.0, 2.0 / k1],
        [0.0, 1.0, 1.0, 1.0],
        [-2.0 / s, 0.0, 2.0 / k1 - 1.0, 2.0 / k1],
        [0.0, -2.0 / h, k1 / h, 0.0],
    ];
    rows.map(|r| InversiveCoords::from_raw(2, &r).expect("closed forms are normalized"))
}
