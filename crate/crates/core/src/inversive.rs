//! Lorentzian model of disks and balls.
//!
//! A `d`-ball (`d` = 2 for disks, 3 for balls) is a normalized space-like
//! vector of `R^{d+1,1}` with quadratic form `Q = diag(1, ..., 1, -1)`. For a
//! ball of curvature `k != 0` and center `c` the coordinates are
//! `k/2 (2c, |c|^2 - 1/k^2 - 1, |c|^2 - 1/k^2 + 1)`; a half-space with inward
//! normal `n` and offset `t` (region `<x, n> >= t`) is `(n, t, t)`.
//!
//! The inversive product classifies pairs: `> 1` nested, `1` internally
//! tangent, `0` orthogonal, `-1` externally tangent, `< -1` disjoint.

use nalgebra::DMatrix;
use thiserror::Error;

/// Drift of `<v, v>` from 1 tolerated at construction.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;
const FLAT_CURVATURE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversiveError {
    #[error("radius must be positive, got {0}")]
    DegenerateRadius(f64),
    #[error("half-space normal must have unit length, got norm {0}")]
    UnnormalizedNormal(f64),
    #[error("coordinates are not normalized: <v,v> = {0}")]
    Unnormalized(f64),
    #[error("coordinates cannot be decoded: {0}")]
    NumericallyDegenerate(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("balls are not externally tangent: product {0}")]
    NotTangent(f64),
    #[error("unsupported dimension {0}; expected 2 or 3")]
    UnsupportedDimension(usize),
}

/// Euclidean description of a `d`-ball.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Solid { center: Vec<f64>, radius: f64 },
    /// Closure of the exterior of the sphere with this center and radius.
    Hollow { center: Vec<f64>, radius: f64 },
    /// The region `<x, normal> >= offset`.
    HalfSpace { normal: Vec<f64>, offset: f64 },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Solid { center, .. } | Shape::Hollow { center, .. } => center.len(),
            Shape::HalfSpace { normal, .. } => normal.len(),
        }
    }

    /// Signed curvature: positive solid, negative hollow, zero half-space.
    pub fn curvature(&self) -> f64 {
        match self {
            Shape::Solid { radius, .. } => 1.0 / radius,
            Shape::Hollow { radius, .. } => -1.0 / radius,
            Shape::HalfSpace { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversiveCoords {
    dim: usize,
    v: [f64; 5],
}

impl InversiveCoords {
    /// Wraps raw coordinates, rejecting anything whose Lorentz norm drifted
    /// from 1 by more than [`NORMALIZATION_TOLERANCE`].
    pub fn from_raw(dim: usize, raw: &[f64]) -> Result<Self, InversiveError> {
        if !(2..=3).contains(&dim) {
            return Err(InversiveError::UnsupportedDimension(dim));
        }
        if raw.len() != dim + 2 {
            return Err(InversiveError::DimensionMismatch(raw.len(), dim + 2));
        }
        let mut v = [0.0; 5];
        v[..raw.len()].copy_from_slice(raw);
        let coords = InversiveCoords { dim, v };
        let norm = coords.lorentz_norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(InversiveError::Unnormalized(norm));
        }
        Ok(coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v[..self.dim + 2]
    }

    pub fn curvature(&self) -> f64 {
        self.v[self.dim + 1] - self.v[self.dim]
    }

    pub fn lorentz_norm(&self) -> f64 {
        lorentz(self.as_slice(), self.as_slice())
    }

    /// The ball with the same boundary and swapped interior.
    pub fn complement(&self) -> Self {
        let mut out = *self;
        out.v.iter_mut().for_each(|x| *x = -*x);
        out
    }

    /// Mirror through the hyperplane `x_d = 0`; the last spatial axis flips.
    pub fn mirror_last_axis(&self) -> Self {
        let mut out = *self;
        out.v[self.dim - 1] = -out.v[self.dim - 1];
        out
    }

    /// Center and radius of a solid ball, `None` otherwise.
    pub fn solid(&self) -> Option<(Vec<f64>, f64)> {
        match decode(self).ok()? {
            Shape::Solid { center, radius } => Some((center, radius)),
            _ => None,
        }
    }
}

/// Lorentzian product `a^T Q b` of two raw vectors of equal length.
///
/// Evaluated with a compensated dot product (error-free products via fused
/// multiply-add, error-free sums), so the result is as accurate as if computed
/// in twice the working precision. The products of nearly tangent balls with
/// large coordinates would otherwise lose most of their digits to cancellation.
pub fn lorentz(a: &[f64], b: &[f64]) -> f64 {
    let last = a.len() - 1;
    let (mut sum, mut err) = (0.0f64, 0.0f64);
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        let y = if i == last { -y } else { y };
        let p = x * y;
        let pe = x.mul_add(y, -p);
        let s = sum + p;
        let z = s - sum;
        let se = (sum - (s - z)) + (p - z);
        sum = s;
        err += pe + se;
    }
    sum + err
}

pub fn encode(shape: &Shape) -> Result<InversiveCoords, InversiveError> {
    let dim = shape.dim();
    if !(2..=3).contains(&dim) {
        return Err(InversiveError::UnsupportedDimension(dim));
    }
    let mut v = [0.0; 5];
    match shape {
        Shape::Solid { center, radius } | Shape::Hollow { center, radius } => {
            if !(*radius > 0.0) || !radius.is_finite() {
                return Err(InversiveError::DegenerateRadius(*radius));
            }
            let k = shape.curvature();
            let c2: f64 = center.iter().map(|x| x * x).sum();
            let r2 = radius * radius;
            for (slot, c) in v.iter_mut().zip(center) {
                *slot = k * c;
            }
            v[dim] = 0.5 * k * (c2 - r2 - 1.0);
            v[dim + 1] = 0.5 * k * (c2 - r2 + 1.0);
        }
        Shape::HalfSpace { normal, offset } => {
            let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(InversiveError::UnnormalizedNormal(norm));
            }
            v[..dim].copy_from_slice(normal);
            v[dim] = *offset;
            v[dim + 1] = *offset;
        }
    }
    InversiveCoords::from_raw(dim, &v[..dim + 2])
}

pub fn decode(coords: &InversiveCoords) -> Result<Shape, InversiveError> {
    let d = coords.dim;
    let v = coords.as_slice();
    let k = coords.curvature();
    if k.abs() < FLAT_CURVATURE {
        let norm = v[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(InversiveError::NumericallyDegenerate(format!(
                "curvature {k:e} with normal of length {norm}"
            )));
        }
        return Ok(Shape::HalfSpace { normal: v[..d].to_vec(), offset: v[d] });
    }
    let center: Vec<f64> = v[..d].iter().map(|x| x / k).collect();
    let radius = 1.0 / k.abs();
    Ok(if k > 0.0 { Shape::Solid { center, radius } } else { Shape::Hollow { center, radius } })
}

pub fn product(a: &InversiveCoords, b: &InversiveCoords) -> Result<f64, InversiveError> {
    if a.dim != b.dim {
        return Err(InversiveError::DimensionMismatch(a.dim, b.dim));
    }
    Ok(lorentz(a.as_slice(), b.as_slice()))
}

/// Lifts a disk to the ball with the same center (at height zero) and curvature.
pub fn blow_up(disk: &InversiveCoords) -> Result<InversiveCoords, InversiveError> {
    if disk.dim != 2 {
        return Err(InversiveError::DimensionMismatch(disk.dim, 2));
    }
    let v = disk.v;
    Ok(InversiveCoords { dim: 3, v: [v[0], v[1], 0.0, v[2], v[3]] })
}

/// Inverse of [`blow_up`]; the ball must be centered on the plane `z = 0`.
pub fn flatten(ball: &InversiveCoords) -> Result<InversiveCoords, InversiveError> {
    if ball.dim != 3 {
        return Err(InversiveError::DimensionMismatch(ball.dim, 3));
    }
    let v = ball.v;
    if v[2].abs() > 1e-9 {
        return Err(InversiveError::NumericallyDegenerate(format!("ball leaves the base plane (z entry {})", v[2])));
    }
    InversiveCoords::from_raw(2, &[v[0], v[1], v[3], v[4]])
}

/// Lorentzian reflection `u - 2 <u, m> m`, the inversion in the ball `mirror`.
pub fn reflect(u: &InversiveCoords, mirror: &InversiveCoords) -> Result<InversiveCoords, InversiveError> {
    let p = product(u, mirror)?;
    let mut out = *u;
    for (o, m) in out.v.iter_mut().zip(mirror.v.iter()) {
        *o = (-2.0 * p).mul_add(*m, *o);
    }
    Ok(out)
}

/// Null vector of a point: a sphere passes through `p` iff its coordinates are
/// Lorentz-orthogonal to this vector.
pub fn point_vector(p: &[f64]) -> Vec<f64> {
    let p2: f64 = p.iter().map(|x| x * x).sum();
    let mut w: Vec<f64> = p.to_vec();
    w.push(0.5 * (p2 - 1.0));
    w.push(0.5 * (p2 + 1.0));
    w
}

/// Tangency point of two externally tangent balls, `None` when it is at infinity.
pub fn tangency_point(a: &InversiveCoords, b: &InversiveCoords) -> Result<Option<Vec<f64>>, InversiveError> {
    let p = product(a, b)?;
    if (p + 1.0).abs() > 1e-6 {
        return Err(InversiveError::NotTangent(p));
    }
    let d = a.dim;
    let w: Vec<f64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x + y).collect();
    let scale = w[d + 1] - w[d];
    let size = w.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if scale.abs() <= 1e-12 * size {
        return Ok(None);
    }
    Ok(Some(w[..d].iter().map(|x| x / scale).collect()))
}

/// A similarity `x -> scale * R x + translation` with `R` orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    pub scale: f64,
    pub rotation: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl Similarity {
    pub fn identity(dim: usize) -> Self {
        let rotation = (0..dim).map(|i| (0..dim).map(|j| f64::from(i == j)).collect()).collect();
        Similarity { scale: 1.0, rotation, translation: vec![0.0; dim] }
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        self.rotate(x).iter().zip(&self.translation).map(|(r, t)| self.scale * r + t).collect()
    }

    fn rotate(&self, x: &[f64]) -> Vec<f64> {
        self.rotation.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Acts linearly on coordinates: with `k` the curvature, `k c` and
    /// `k (|c|^2 - r^2)` transform affinely, which also covers half-spaces.
    pub fn apply(&self, u: &InversiveCoords) -> Result<InversiveCoords, InversiveError> {
        let d = u.dim;
        if self.translation.len() != d {
            return Err(InversiveError::DimensionMismatch(self.translation.len(), d));
        }
        let v = u.as_slice();
        let k = v[d + 1] - v[d];
        let s = v[d + 1] + v[d];
        let a = self.rotate(&v[..d]);
        let t = &self.translation;
        let at: f64 = a.iter().zip(t).map(|(x, y)| x * y).sum();
        let t2: f64 = t.iter().map(|x| x * x).sum();
        let k_new = k / self.scale;
        let s_new = self.scale * s + 2.0 * at + k * t2 / self.scale;
        let mut out = [0.0; 5];
        for i in 0..d {
            out[i] = a[i] + k_new * t[i];
        }
        out[d] = 0.5 * (s_new - k_new);
        out[d + 1] = 0.5 * (s_new + k_new);
        InversiveCoords::from_raw(d, &out[..d + 2])
    }
}

/// Rotation taking the unit vector `from` to the unit vector `to` (2 or 3 dims).
fn rotation_between(from: &[f64], to: &[f64]) -> Vec<Vec<f64>> {
    match from.len() {
        2 => {
            let angle = to[1].atan2(to[0]) - from[1].atan2(from[0]);
            let (s, c) = angle.sin_cos();
            vec![vec![c, -s], vec![s, c]]
        }
        _ => {
            let axis = [
                from[1] * to[2] - from[2] * to[1],
                from[2] * to[0] - from[0] * to[2],
                from[0] * to[1] - from[1] * to[0],
            ];
            let cos: f64 = from.iter().zip(to).map(|(a, b)| a * b).sum();
            let sin = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
            let (k, cos, sin) = if sin < 1e-12 {
                if cos > 0.0 {
                    return Similarity::identity(3).rotation;
                }
                // Half turn about any axis perpendicular to `from`.
                let pick = if from[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let dot: f64 = pick.iter().zip(from).map(|(a, b)| a * b).sum();
                let mut k: Vec<f64> = pick.iter().zip(from).map(|(p, f)| p - dot * f).collect();
                let len = k.iter().map(|x| x * x).sum::<f64>().sqrt();
                k.iter_mut().for_each(|x| *x /= len);
                (k, -1.0, 0.0)
            } else {
                (axis.iter().map(|x| x / sin).collect(), cos, sin)
            };
            // Rodrigues: R = cI + s[k]x + (1 - c) k k^T
            let cross = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| f64::from(i == j) * cos + sin * cross[i][j] + (1.0 - cos) * k[i] * k[j])
                        .collect()
                })
                .collect()
        }
    }
}

/// Maps the externally tangent pair `(i, j)` to the half-spaces `x_d >= 1` and
/// `x_d <= -1` by an inversion centered at their tangency point followed by a
/// similarity. Every other ball of a packing lands in the slab between them.
pub fn standard_transform(
    packing: &[InversiveCoords],
    i: usize,
    j: usize,
) -> Result<Vec<InversiveCoords>, InversiveError> {
    let (bi, bj) = (packing[i], packing[j]);
    let d = bi.dim;
    if let Some(other) = packing.iter().find(|b| b.dim != d) {
        return Err(InversiveError::DimensionMismatch(other.dim, d));
    }
    let mut balls = packing.to_vec();
    if let Some(p) = tangency_point(&bi, &bj)? {
        let mirror = encode(&Shape::Solid { center: p, radius: 1.0 })?;
        balls = balls.iter().map(|b| reflect(b, &mirror)).collect::<Result<_, _>>()?;
    }
    // Both are (numerically) half-spaces now: (n, t, t).
    let (vi, vj) = (balls[i].as_slice(), balls[j].as_slice());
    let norm = vi[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
    let normal: Vec<f64> = vi[..d].iter().map(|x| x / norm).collect();
    let mut axis = vec![0.0; d];
    axis[d - 1] = 1.0;
    let rotation = rotation_between(&normal, &axis);
    let (ti, tj) = (0.5 * (vi[d] + vi[d + 1]), 0.5 * (vj[d] + vj[d + 1]));
    let width = ti + tj;
    if !(width > 0.0) {
        return Err(InversiveError::NotTangent(lorentz(vi, vj)));
    }
    let scale = 2.0 / width;
    let mid = 0.5 * (ti - tj);
    let mut translation = vec![0.0; d];
    translation[d - 1] = -scale * mid;
    let similarity = Similarity { scale, rotation, translation };
    let mut out: Vec<InversiveCoords> = balls.iter().map(|b| similarity.apply(b)).collect::<Result<_, _>>()?;
    let mut upper = [0.0; 5];
    upper[d - 1] = 1.0;
    upper[d] = 1.0;
    upper[d + 1] = 1.0;
    let mut lower = upper;
    lower[d - 1] = -1.0;
    out[i] = InversiveCoords { dim: d, v: upper };
    out[j] = InversiveCoords { dim: d, v: lower };
    Ok(out)
}

/// Pairwise inversive products of a ball collection.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub ids: Vec<usize>,
    pub entries: DMatrix<f64>,
}

impl GramMatrix {
    pub fn new(ids: Vec<usize>, balls: &[InversiveCoords]) -> Result<Self, InversiveError> {
        let n = balls.len();
        let mut entries = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let p = product(&balls[a], &balls[b])?;
                entries[(a, b)] = p;
                entries[(b, a)] = p;
            }
        }
        Ok(GramMatrix { ids, entries })
    }

    pub fn max_abs_difference(&self, other: &GramMatrix) -> f64 {
        (&self.entries - &other.entries).abs().max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(x: f64, y: f64, r: f64) -> InversiveCoords {
        encode(&Shape::Solid { center: vec![x, y], radius: r }).unwrap()
    }

    fn half(nx: f64, ny: f64, t: f64) -> InversiveCoords {
        encode(&Shape::HalfSpace { normal: vec![nx, ny], offset: t }).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn unit_disk_at_origin() {
        assert_eq!(disk(0.0, 0.0, 1.0).as_slice(), &[0.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn upper_half_plane() {
        assert_eq!(half(0.0, 1.0, 1.0).as_slice(), &[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(
            decode(&half(0.0, 1.0, 1.0)).unwrap(),
            Shape::HalfSpace { normal: vec![0.0, 1.0], offset: 1.0 }
        );
    }

    #[test]
    fn pyramid_row_d1() {
        for k in [1.2, 2.0, 3.5] {
            let d1 = disk(0.0, 1.0 / k - 1.0, 1.0 / k);
            assert!(close(d1.as_slice(), &[0.0, 1.0 - k, -1.0, k - 1.0], 1e-12));
        }
    }

    #[test]
    fn hollow_tangency_disk_row() {
        let k1: f64 = 2.0;
        let s = (k1 * k1 + 4.0).sqrt();
        let raw = [0.0, -2.0 / s, k1 / s, 0.0];
        let t = InversiveCoords::from_raw(2, &raw).unwrap();
        match decode(&t).unwrap() {
            Shape::Hollow { center, radius } => {
                assert!(close(&center, &[0.0, 1.0], 1e-12));
                assert!((radius - 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("expected hollow, got {other:?}"),
        }
        assert!(close(encode(&decode(&t).unwrap()).unwrap().as_slice(), &raw, 1e-12));
    }

    #[test]
    fn products_classify_pairs() {
        assert!((product(&disk(0.0, 0.0, 1.0), &disk(2.0, 0.0, 1.0)).unwrap() + 1.0).abs() < 1e-12);
        assert!((product(&half(0.0, 1.0, 1.0), &half(0.0, -1.0, 1.0)).unwrap() + 1.0).abs() < 1e-12);
        let b = disk(0.3, -0.7, 0.25);
        assert!((product(&b, &b).unwrap() - 1.0).abs() < 1e-12);
        // internally tangent and orthogonal
        assert!((product(&disk(0.0, 0.0, 2.0), &disk(1.0, 0.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!(product(&disk(0.0, 0.0, 1.0), &disk(2f64.sqrt(), 0.0, 1.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn product_dimension_mismatch() {
        let ball = blow_up(&disk(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(product(&ball, &disk(0.0, 0.0, 1.0)), Err(InversiveError::DimensionMismatch(3, 2)));
    }

    #[test]
    fn blow_up_examples() {
        assert_eq!(blow_up(&disk(0.0, 0.0, 1.0)).unwrap().as_slice(), &[0.0, 0.0, 0.0, -1.0, 0.0]);
        let hs = encode(&Shape::HalfSpace { normal: vec![0.0, 1.0, 0.0], offset: 1.0 }).unwrap();
        assert_eq!(blow_up(&half(0.0, 1.0, 1.0)).unwrap(), hs);
        let (a, b) = (disk(0.0, 0.0, 1.0), disk(0.0, 3.0, 2.0));
        let lifted = product(&blow_up(&a).unwrap(), &blow_up(&b).unwrap()).unwrap();
        assert!((lifted + 1.0).abs() < 1e-12);
        assert_eq!(flatten(&blow_up(&b).unwrap()).unwrap(), b);
    }

    #[test]
    fn reflection_examples() {
        let m = disk(1.0, 2.0, 0.5);
        assert!(close(reflect(&m, &m).unwrap().as_slice(), m.complement().as_slice(), 1e-12));
        // A disk orthogonal to the unit disk is fixed by inversion in it.
        let u = disk(2f64.sqrt(), 0.0, 1.0);
        assert!(close(reflect(&u, &disk(0.0, 0.0, 1.0)).unwrap().as_slice(), u.as_slice(), 1e-12));
        let w = disk(-0.4, 0.1, 0.3);
        let twice = reflect(&reflect(&w, &m).unwrap(), &m).unwrap();
        assert!(close(twice.as_slice(), w.as_slice(), 1e-12));
    }

    #[test]
    fn decode_rejects_bad_input() {
        assert_eq!(encode(&Shape::Solid { center: vec![0.0, 0.0], radius: 0.0 }), Err(InversiveError::DegenerateRadius(0.0)));
        assert!(matches!(
            encode(&Shape::HalfSpace { normal: vec![0.0, 2.0], offset: 0.0 }),
            Err(InversiveError::UnnormalizedNormal(_))
        ));
        assert!(matches!(InversiveCoords::from_raw(2, &[1.0, 1.0, 0.0, 0.0]), Err(InversiveError::Unnormalized(_))));
    }

    #[test]
    fn tangency_point_of_touching_disks() {
        let p = tangency_point(&disk(0.0, 0.0, 1.0), &disk(3.0, 0.0, 2.0)).unwrap().unwrap();
        assert!(close(&p, &[1.0, 0.0], 1e-12));
        assert_eq!(tangency_point(&half(0.0, 1.0, 1.0), &half(0.0, -1.0, 1.0)).unwrap(), None);
    }

    #[test]
    fn standard_transform_of_standard_packing_is_congruent() {
        let packing = vec![half(0.0, 1.0, 1.0), half(0.0, -1.0, 1.0), disk(0.0, 0.0, 1.0), disk(2.0, 0.0, 1.0)];
        let out = standard_transform(&packing, 0, 1).unwrap();
        for (a, b) in packing.iter().zip(&out) {
            assert!(close(a.as_slice(), b.as_slice(), 1e-12), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn standard_transform_preserves_products() {
        let packing = vec![disk(0.0, 0.0, 1.0), disk(2.5, 0.0, 1.5), disk(0.8, 1.7, 0.4), disk(-1.0, -2.0, 0.7)];
        let out = standard_transform(&packing, 0, 1).unwrap();
        let before = GramMatrix::new((0..4).collect(), &packing).unwrap();
        let after = GramMatrix::new((0..4).collect(), &out).unwrap();
        assert!(before.max_abs_difference(&after) < 1e-9);
        assert_eq!(out[0].as_slice(), &[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(out[1].as_slice(), &[0.0, -1.0, 1.0, 1.0]);
        for b in &out[2..] {
            let (c, r) = b.solid().unwrap();
            assert!(c[1] - r >= -1.0 - 1e-9 && c[1] + r <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn standard_transform_requires_tangency() {
        let packing = vec![disk(0.0, 0.0, 1.0), disk(3.0, 0.0, 1.0)];
        assert!(matches!(standard_transform(&packing, 0, 1), Err(InversiveError::NotTangent(_))));
    }

    #[test]
    fn standard_transform_in_three_dimensions() {
        let balls: Vec<_> = [(0.0, 0.0, 0.0, 1.0), (0.0, 0.0, 2.0, 1.0), (1.5, 0.5, 0.9, 0.5)]
            .iter()
            .map(|&(x, y, z, r)| encode(&Shape::Solid { center: vec![x, y, z], radius: r }).unwrap())
            .collect();
        let out = standard_transform(&balls, 0, 1).unwrap();
        assert_eq!(out[0].as_slice(), &[0.0, 0.0, 1.0, 1.0, 1.0]);
        let before = GramMatrix::new(vec![0, 1, 2], &balls).unwrap();
        let after = GramMatrix::new(vec![0, 1, 2], &out).unwrap();
        assert!(before.max_abs_difference(&after) < 1e-9);
    }

    #[test]
    fn similarity_moves_solid_ball() {
        let sim = Similarity { scale: 2.0, rotation: vec![vec![0.0, -1.0], vec![1.0, 0.0]], translation: vec![1.0, 1.0] };
        let out = sim.apply(&disk(1.0, 0.0, 0.5)).unwrap();
        let (c, r) = out.solid().unwrap();
        assert!(close(&c, &[1.0, 3.0], 1e-12));
        assert!((r - 1.0).abs() < 1e-12);
        let moved = sim.apply(&half(0.0, 1.0, 1.0)).unwrap();
        assert!(close(&sim.apply_point(&[0.0, 1.0]), &[-1.0, 1.0], 1e-12));
        assert!(close(moved.as_slice(), half(-1.0, 0.0, 1.0).as_slice(), 1e-12));
    }
}
