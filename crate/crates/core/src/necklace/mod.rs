//! The full pipeline: diagram → patchwork → disk packing → blown-up balls →
//! per-crossing bridge balls → threads, and a verifier for the result.
//!
//! Ball ids: crossing centers `0..n`, medial balls `n..3n` (the patchwork
//! vertex ids), then for crossing `k` the bridge balls `3n + 2k` (tangent to
//! the closest-pair ball `b_c`) and `3n + 2k + 1`.

mod projection;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use projection::{project_threads, thread_polylines, ProjectedCrossing, ProjectionOutcome};

use crate::circlepack::{pack, PackOptions, PackingError, DEFAULT_PRECISION, PRECISION_FLOOR};
use crate::crossing::{
    bridge_balls, expected_tangency_product, label_pyramid, CrossingError, PyramidalSystem, LABELS,
};
use crate::diagram::{DiagramError, LinkDiagram, Pass};
use crate::inversive::{blow_up, encode, product, InversiveCoords, InversiveError, Shape};
use crate::patchwork::{build_patchwork, PatchworkError};

pub const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NecklaceError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Patchwork(#[from] PatchworkError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Crossing(#[from] CrossingError),
    #[error(transparent)]
    Inversive(#[from] InversiveError),
    #[error("thread {component} broken between positions {position} and the next: product {product}")]
    ThreadBroken { component: usize, position: usize, product: f64 },
    #[error("invalid necklace: {0}")]
    Invalid(String),
}

impl NecklaceError {
    /// True for failures of the numerical pipeline (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            NecklaceError::Diagram(_) | NecklaceError::Invalid(_) => false,
            NecklaceError::Patchwork(PatchworkError::Diagram(_)) => false,
            NecklaceError::Packing(PackingError::InvalidParameter(_)) => false,
            NecklaceError::Packing(PackingError::Patchwork(PatchworkError::Diagram(_))) => false,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BallRole {
    Medial,
    CrossingCenter,
    Bridge,
}

impl BallRole {
    pub fn name(self) -> &'static str {
        match self {
            BallRole::Medial => "medial",
            BallRole::CrossingCenter => "crossing",
            BallRole::Bridge => "bridge",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "medial" => Some(BallRole::Medial),
            "crossing" => Some(BallRole::CrossingCenter),
            "bridge" => Some(BallRole::Bridge),
            _ => None,
        }
    }
}

/// What a ball stands for: an arc of the diagram or a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BallSource {
    Arc(u32),
    Crossing(usize),
}

impl fmt::Display for BallSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallSource::Arc(a) => write!(f, "arc:{a}"),
            BallSource::Crossing(x) => write!(f, "crossing:{x}"),
        }
    }
}

impl std::str::FromStr for BallSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad ball source {s:?}");
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "arc" => value.parse().map(BallSource::Arc).map_err(|_| bad()),
            "crossing" => value.parse().map(BallSource::Crossing).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub id: usize,
    pub role: BallRole,
    pub source: BallSource,
    pub coords: InversiveCoords,
}

impl Ball {
    pub fn center(&self) -> [f64; 3] {
        let v = self.coords.as_slice();
        let k = self.coords.curvature();
        [v[0] / k, v[1] / k, v[2] / k]
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.coords.curvature()
    }
}

/// The balls of one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingRecord {
    pub crossing: usize,
    /// Ball ids in pyramid label order `x, 1, 2, -1, -2`.
    pub pyramid: [usize; 5],
    /// `[b3, b3']`; `b3` is tangent to the closest-pair ball `b_c`.
    pub bridges: [usize; 2],
    /// Closest-pair label, 1 (under-strand pair) or 2 (over-strand pair).
    pub closest: i8,
    /// Whether the bridge balls lie above the base plane.
    pub over: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssembleOptions {
    /// Angle-sum precision of the circle packing solver.
    pub precision: f64,
    /// Radius of the outer-face disks.
    pub outer_radius: f64,
    /// Tolerance of the tangency and containment checks during assembly.
    pub tolerance: f64,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { precision: DEFAULT_PRECISION, outer_radius: 1.0, tolerance: DEFAULT_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Necklace {
    diagram: LinkDiagram,
    balls: Vec<Ball>,
    threads: Vec<Vec<usize>>,
    crossings: Vec<CrossingRecord>,
    precision: f64,
    solver_precision: f64,
    outer_radius: f64,
}

impl Necklace {
    /// Assembles a necklace from stored parts, checking id consistency.
    pub fn from_parts(
        diagram: LinkDiagram,
        balls: Vec<Ball>,
        threads: Vec<Vec<usize>>,
        crossings: Vec<CrossingRecord>,
        precision: f64,
        outer_radius: f64,
    ) -> Result<Self, NecklaceError> {
        for (i, b) in balls.iter().enumerate() {
            if b.id != i {
                return Err(NecklaceError::Invalid(format!("ball at position {i} has id {}", b.id)));
            }
            if b.coords.dim() != 3 {
                return Err(NecklaceError::Invalid(format!("ball {i} is not 3-dimensional")));
            }
        }
        let exists = |id: &usize| *id < balls.len();
        if !threads.iter().flatten().all(exists) {
            return Err(NecklaceError::Invalid("thread references a missing ball".into()));
        }
        if crossings.len() != diagram.crossing_count() {
            return Err(NecklaceError::Invalid("crossing records do not match the diagram".into()));
        }
        for (k, rec) in crossings.iter().enumerate() {
            if rec.crossing != k || !rec.pyramid.iter().chain(&rec.bridges).all(exists) || !matches!(rec.closest, 1 | 2) {
                return Err(NecklaceError::Invalid(format!("bad record for crossing {k}")));
            }
        }
        Ok(Necklace { diagram, balls, threads, crossings, precision, solver_precision: precision, outer_radius })
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn threads(&self) -> &[Vec<usize>] {
        &self.threads
    }

    pub fn crossings(&self) -> &[CrossingRecord] {
        &self.crossings
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    /// Precision the packing was actually solved to (at most [`Necklace::precision`]).
    pub fn solver_precision(&self) -> f64 {
        self.solver_precision
    }

    /// Records the precision the packing was solved to.
    pub fn with_solver_precision(mut self, eps: f64) -> Self {
        self.solver_precision = eps;
        self
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn count(&self, role: BallRole) -> usize {
        self.balls.iter().filter(|b| b.role == role).count()
    }

    /// Mutable access to ball coordinates, for building counterexamples.
    pub fn ball_mut(&mut self, id: usize) -> Option<&mut Ball> {
        self.balls.get_mut(id)
    }
}

/// Runs the whole construction for `diagram`.
///
/// The solver precision is an upper bound: when a numerical check of the
/// result (tangency, containment, the per-crossing identities) misses the
/// tolerance, the packing is recomputed at a tenfold tighter precision, down
/// to [`PRECISION_FLOOR`].
pub fn assemble(diagram: &LinkDiagram, options: &AssembleOptions) -> Result<Necklace, NecklaceError> {
    if !(options.precision > 0.0 && options.tolerance > 0.0) {
        return Err(PackingError::InvalidParameter("precision and tolerance must be positive".into()).into());
    }
    for k in 0.. {
        let eps = options.precision / 10f64.powi(k);
        let tighter = options.precision / 10f64.powi(k + 1);
        match assemble_at(diagram, options, eps) {
            Ok(necklace) => {
                let report = verify(&necklace, &VerifyOptions { tolerance: options.tolerance, projection: false });
                if (report.packing_ok() && report.threads_ok() && report.identities_ok()) || tighter < PRECISION_FLOOR {
                    return Ok(necklace);
                }
            }
            Err(e) if e.is_numerical() && tighter >= PRECISION_FLOOR => {}
            Err(e) => return Err(e),
        }
    }
    unreachable!("the precision floor ends the refinement")
}

fn assemble_at(diagram: &LinkDiagram, options: &AssembleOptions, eps: f64) -> Result<Necklace, NecklaceError> {
    let n = diagram.crossing_count();
    let patchwork = build_patchwork(diagram)?;
    let pack_options = PackOptions { boundary_radius: options.outer_radius, precision: eps };
    let packing = pack(&patchwork, &pack_options)?;

    let mut balls = Vec::with_capacity(5 * n);
    for disk in &packing.disks {
        let coords = blow_up(&encode(&Shape::Solid { center: disk.center.to_vec(), radius: disk.radius })?)?;
        let (role, source) = match patchwork.arc_of(disk.id) {
            Some(label) => (BallRole::Medial, BallSource::Arc(label)),
            None => (BallRole::CrossingCenter, BallSource::Crossing(disk.id)),
        };
        balls.push(Ball { id: disk.id, role, source, coords });
    }
    let mut crossings = Vec::with_capacity(n);
    for x in 0..n {
        let system = label_pyramid(&patchwork, x, &packing, options.tolerance)?;
        let over = system.closest == 2;
        let bridge = bridge_balls(&system, over, options.tolerance)?;
        let first = balls.len();
        for coords in [bridge.b3, bridge.b3_prime] {
            let id = balls.len();
            balls.push(Ball { id, role: BallRole::Bridge, source: BallSource::Crossing(x), coords });
        }
        crossings.push(CrossingRecord {
            crossing: x,
            pyramid: system.ids,
            bridges: [first, first + 1],
            closest: system.closest,
            over,
        });
    }
    let threads = thread_ids(diagram, &crossings);
    let mut necklace =
        Necklace::from_parts(diagram.clone(), balls, threads, crossings, options.precision, options.outer_radius)?;
    necklace.solver_precision = eps;
    check_threads(&necklace, &necklace.threads, options.tolerance)?;
    Ok(necklace)
}

/// Pyramid label of a slot position: `a, b, c, d` → `1, 2, -1, -2`.
fn slot_label(position: usize) -> i8 {
    [1, 2, -1, -2][position]
}

/// Ball ids inserted for one pass through a crossing.
fn pass_insertion(pass: &Pass, record: &CrossingRecord) -> Vec<usize> {
    let label = slot_label(pass.entry);
    if label.abs() == record.closest {
        let [b3, b3p] = record.bridges;
        if label == record.closest {
            vec![b3, b3p]
        } else {
            vec![b3p, b3]
        }
    } else {
        vec![record.pyramid[0]]
    }
}

fn thread_ids(diagram: &LinkDiagram, crossings: &[CrossingRecord]) -> Vec<Vec<usize>> {
    let n = diagram.crossing_count();
    let arcs: Vec<u32> = diagram.arcs().collect();
    let medial = |label: u32| n + arcs.binary_search(&label).expect("arc label present");
    diagram
        .components()
        .iter()
        .map(|c| {
            let mut thread = Vec::new();
            for (arc, pass) in c.arcs.iter().zip(&c.passes) {
                thread.push(medial(*arc));
                thread.extend(pass_insertion(pass, &crossings[pass.crossing]));
            }
            thread
        })
        .collect()
}

fn check_threads(necklace: &Necklace, threads: &[Vec<usize>], tol: f64) -> Result<(), NecklaceError> {
    for (component, thread) in threads.iter().enumerate() {
        for position in 0..thread.len() {
            let a = &necklace.balls[thread[position]].coords;
            let b = &necklace.balls[thread[(position + 1) % thread.len()]].coords;
            let p = product(a, b)?;
            if (p + 1.0).abs() > tol {
                return Err(NecklaceError::ThreadBroken { component, position, product: p });
            }
        }
    }
    Ok(())
}

/// Recomputes the per-component threads from the diagram and the crossing
/// records and checks that consecutive balls are tangent within `tol`.
pub fn extract_thread(necklace: &Necklace, tol: f64) -> Result<Vec<Vec<usize>>, NecklaceError> {
    let threads = thread_ids(&necklace.diagram, &necklace.crossings);
    check_threads(necklace, &threads, tol)?;
    Ok(threads)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub projection: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance: DEFAULT_TOLERANCE, projection: true }
    }
}

/// Residuals of the per-crossing identities.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingCheck {
    pub crossing: usize,
    /// Set when the pyramid itself could not be validated.
    pub error: Option<String>,
    pub lambda: [f64; 2],
    pub kappa: f64,
    pub closest: i8,
    /// `|k1 k2 - 4|` with `k_i = (1 - lambda_i) / 2`.
    pub kappa_product_residual: f64,
    /// `|(1 - lambda_1)(1 - lambda_2) - 16|`.
    pub lambda_product_residual: f64,
    /// Whether the recorded closest pair has standard curvature at most 2.
    pub closest_admissible: bool,
    /// `|<b3, b3'> + 1|`.
    pub bridge_tangency_residual: f64,
    /// Worst of `|<b_c, b3> + 1|` and `|<b_{-c}, b3'> + 1|`.
    pub bridge_contact_residual: f64,
    /// `|<b_{-c}, b3> - (-1 - 2 sqrt k)|`.
    pub neg_c_residual: f64,
    /// `|<b_t, b3> - (2 + 2 sqrt k - k) / sqrt(4 + k^2)|`.
    pub tangency_product_residual: f64,
    /// Smallest product of a bridge ball with the tangency ball.
    pub tangency_containment: f64,
    /// Largest `product + 1` of a bridge ball with a pyramid ball.
    pub pyramid_margin: f64,
    /// Whether the bridges should lie above the plane, from the diagram.
    pub expected_over: bool,
    /// Heights of the two bridge-ball centers.
    pub bridge_heights: [f64; 2],
}

impl CrossingCheck {
    pub fn identities_ok(&self, tol: f64) -> bool {
        self.error.is_none()
            && self.closest_admissible
            && [
                self.kappa_product_residual,
                self.lambda_product_residual,
                self.bridge_tangency_residual,
                self.bridge_contact_residual,
                self.neg_c_residual,
                self.tangency_product_residual,
                self.pyramid_margin,
            ]
            .iter()
            .all(|&r| r <= tol)
            && self.tangency_containment >= 1.0 - tol
    }

    pub fn over_under_ok(&self) -> bool {
        self.error.is_none() && self.bridge_heights.iter().all(|&z| (z > 0.0) == self.expected_over && z != 0.0)
    }

    /// Largest of the identity residuals (for reporting).
    pub fn worst_identity_residual(&self) -> f64 {
        [
            self.kappa_product_residual,
            self.lambda_product_residual,
            self.bridge_tangency_residual,
            self.bridge_contact_residual,
            self.neg_c_residual,
            self.tangency_product_residual,
        ]
        .iter()
        .fold(0.0, |a: f64, &b| a.max(b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub tolerance: f64,
    pub ball_count: usize,
    pub expected_ball_count: usize,
    /// Largest `<b_i, b_j> + 1` over all pairs, and the pair attaining it.
    pub worst_separation: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Largest `|<b_i, b_{i+1}> + 1|` along the threads.
    pub worst_thread_residual: f64,
    /// `None` when threads cover every ball exactly once and match the diagram.
    pub coverage_error: Option<String>,
    pub crossings: Vec<CrossingCheck>,
    pub projection: ProjectionOutcome,
}

impl VerificationReport {
    pub fn packing_ok(&self) -> bool {
        self.ball_count == self.expected_ball_count && self.worst_separation <= self.tolerance
    }

    pub fn threads_ok(&self) -> bool {
        self.coverage_error.is_none() && self.worst_thread_residual <= self.tolerance
    }

    pub fn identities_ok(&self) -> bool {
        self.crossings.iter().all(|c| c.identities_ok(self.tolerance))
    }

    pub fn over_under_ok(&self) -> bool {
        self.crossings.iter().all(CrossingCheck::over_under_ok)
    }

    pub fn projection_ok(&self) -> bool {
        matches!(self.projection, ProjectionOutcome::Match | ProjectionOutcome::Skipped)
    }

    pub fn passed(&self) -> bool {
        self.packing_ok() && self.threads_ok() && self.identities_ok() && self.over_under_ok() && self.projection_ok()
    }

    /// Crossings whose over/under check fails.
    pub fn over_under_failures(&self) -> Vec<usize> {
        self.crossings.iter().filter(|c| !c.over_under_ok()).map(|c| c.crossing).collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "packing      {}: {} balls (expected {}), worst <bi,bj>+1 = {:.3e}{}",
            status(self.packing_ok()),
            self.ball_count,
            self.expected_ball_count,
            self.worst_separation,
            self.worst_pair.map(|(a, b)| format!(" at ({a}, {b})")).unwrap_or_default()
        )?;
        writeln!(
            f,
            "threads      {}: worst tangency residual {:.3e}{}",
            status(self.threads_ok()),
            self.worst_thread_residual,
            self.coverage_error.as_ref().map(|e| format!("; {e}")).unwrap_or_default()
        )?;
        let worst = self.crossings.iter().map(CrossingCheck::worst_identity_residual).fold(0.0, f64::max);
        writeln!(f, "identities   {}: worst residual {:.3e}", status(self.identities_ok()), worst)?;
        for c in self.crossings.iter().filter(|c| !c.identities_ok(self.tolerance)) {
            writeln!(f, "  crossing {}: {}", c.crossing, c.error.clone().unwrap_or_else(|| format!("{c:?}")))?;
        }
        let failures = self.over_under_failures();
        writeln!(
            f,
            "over/under   {}{}",
            status(failures.is_empty()),
            if failures.is_empty() { String::new() } else { format!(": wrong side at crossings {failures:?}") }
        )?;
        write!(f, "projection   {}: {}", status(self.projection_ok()), self.projection)
    }
}

fn check_crossing(necklace: &Necklace, record: &CrossingRecord, tol: f64) -> CrossingCheck {
    let ball = |id: usize| &necklace.balls[id].coords;
    let heights = record.bridges.map(|id| necklace.balls[id].center()[2]);
    let expected_over = record.closest == 2;
    let mut check = CrossingCheck {
        crossing: record.crossing,
        error: None,
        lambda: [f64::NAN; 2],
        kappa: f64::NAN,
        closest: record.closest,
        kappa_product_residual: f64::INFINITY,
        lambda_product_residual: f64::INFINITY,
        closest_admissible: false,
        bridge_tangency_residual: f64::INFINITY,
        bridge_contact_residual: f64::INFINITY,
        neg_c_residual: f64::INFINITY,
        tangency_product_residual: f64::INFINITY,
        tangency_containment: f64::NEG_INFINITY,
        pyramid_margin: f64::INFINITY,
        expected_over,
        bridge_heights: heights,
    };
    if record.over != expected_over {
        check.error = Some(format!("recorded side disagrees with closest pair {}", record.closest));
        return check;
    }
    let balls = record.pyramid.map(|id| *ball(id));
    let system = match PyramidalSystem::from_balls(record.crossing, record.pyramid, balls, tol) {
        Ok(s) => s,
        Err(e) => {
            check.error = Some(e.to_string());
            return check;
        }
    };
    let p = |a: &InversiveCoords, b: &InversiveCoords| product(a, b).unwrap_or(f64::NAN);
    let [l1, l2] = system.lambda;
    let c = record.closest;
    // Same closed form as used during assembly.
    let kappa = if c == 1 { (1.0 - l1) / 2.0 } else { 8.0 / (1.0 - l1) };
    let [k1, k2] = system.standard_curvatures();
    let (b3, b3p) = (ball(record.bridges[0]), ball(record.bridges[1]));
    check.lambda = system.lambda;
    check.kappa = kappa;
    check.kappa_product_residual = (k1 * k2 - 4.0).abs();
    check.lambda_product_residual = ((1.0 - l1) * (1.0 - l2) - 16.0).abs();
    check.closest_admissible = [k1, k2][(c - 1) as usize] <= 2.0 + tol;
    check.bridge_tangency_residual = (p(b3, b3p) + 1.0).abs();
    check.bridge_contact_residual = (p(system.ball(c), b3) + 1.0).abs().max((p(system.ball(-c), b3p) + 1.0).abs());
    check.neg_c_residual = (p(system.ball(-c), b3) - (-1.0 - 2.0 * kappa.sqrt())).abs();
    check.tangency_product_residual = (p(&system.tangency, b3) - expected_tangency_product(kappa)).abs();
    check.tangency_containment = p(&system.tangency, b3).min(p(&system.tangency, b3p));
    check.pyramid_margin = [b3, b3p]
        .iter()
        .flat_map(|b| LABELS.iter().map(move |&l| (b, l)))
        .map(|(b, l)| p(b, system.ball(l)) + 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    check
}

fn coverage(necklace: &Necklace) -> Option<String> {
    let expected = thread_ids(&necklace.diagram, &necklace.crossings);
    if expected != necklace.threads {
        return Some("threads do not follow the diagram components".into());
    }
    let mut seen = BTreeSet::new();
    for &id in necklace.threads.iter().flatten() {
        if !seen.insert(id) {
            return Some(format!("ball {id} appears twice in the threads"));
        }
    }
    if seen.len() != necklace.balls.len() {
        return Some(format!("threads cover {} of {} balls", seen.len(), necklace.balls.len()));
    }
    let n = necklace.diagram.crossing_count();
    let counts = [BallRole::Medial, BallRole::CrossingCenter, BallRole::Bridge].map(|r| necklace.count(r));
    if counts != [2 * n, n, 2 * n] {
        return Some(format!("role counts {counts:?}, expected [{}, {n}, {}]", 2 * n, 2 * n));
    }
    None
}

/// Checks every verifiable property of a necklace. Failures are reported,
/// never raised.
pub fn verify(necklace: &Necklace, options: &VerifyOptions) -> VerificationReport {
    let tol = options.tolerance;
    let balls = &necklace.balls;
    let mut worst_separation = f64::NEG_INFINITY;
    let mut worst_pair = None;
    for i in 0..balls.len() {
        for j in (i + 1)..balls.len() {
            let p = product(&balls[i].coords, &balls[j].coords).unwrap_or(f64::INFINITY) + 1.0;
            if !(p <= worst_separation) {
                worst_separation = p;
                worst_pair = Some((i, j));
            }
        }
    }
    let mut worst_thread_residual: f64 = 0.0;
    for thread in &necklace.threads {
        for k in 0..thread.len() {
            let p = product(&balls[thread[k]].coords, &balls[thread[(k + 1) % thread.len()]].coords);
            worst_thread_residual = worst_thread_residual.max(p.map(|p| (p + 1.0).abs()).unwrap_or(f64::INFINITY));
        }
    }
    let crossings = necklace.crossings.iter().map(|r| check_crossing(necklace, r, tol)).collect();
    let projection = if options.projection { projection::round_trip(necklace) } else { ProjectionOutcome::Skipped };
    VerificationReport {
        tolerance: tol,
        ball_count: balls.len(),
        expected_ball_count: 5 * necklace.diagram.crossing_count(),
        worst_separation,
        worst_pair,
        worst_thread_residual,
        coverage_error: coverage(necklace),
        crossings,
        projection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";

    fn necklace(pd: &str) -> Necklace {
        assemble(&parse_pd(pd).unwrap(), &AssembleOptions::default()).unwrap()
    }

    #[test]
    fn trefoil_has_fifteen_balls_and_one_thread() {
        let n = necklace(TREFOIL);
        assert_eq!(n.balls().len(), 15);
        assert_eq!(n.threads().len(), 1);
        assert_eq!(n.threads()[0].len(), 15);
        assert_eq!(
            [BallRole::Medial, BallRole::CrossingCenter, BallRole::Bridge].map(|r| n.count(r)),
            [6, 3, 6]
        );
    }

    #[test]
    fn hopf_threads_total_ten() {
        let n = necklace(HOPF);
        assert_eq!(n.threads().len(), 2);
        assert_eq!(n.threads().iter().map(Vec::len).sum::<usize>(), 10);
    }

    #[test]
    fn hopf_pyramids_are_symmetric() {
        let d = parse_pd(HOPF).unwrap();
        let opts = AssembleOptions { precision: 1e-12, ..AssembleOptions::default() };
        let n = assemble(&d, &opts).unwrap();
        let report = verify(&n, &VerifyOptions::default());
        for c in &report.crossings {
            assert!((c.lambda[0] - c.lambda[1]).abs() < 1e-9, "{:?}", c.lambda);
            assert!((c.kappa - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn trefoil_verifies() {
        let n = necklace(TREFOIL);
        let report = verify(&n, &VerifyOptions::default());
        assert!(report.passed(), "{report}");
        assert!(report.worst_thread_residual < 1e-3);
        assert_eq!(extract_thread(&n, 1e-3).unwrap(), n.threads());
    }

    #[test]
    fn z_flip_is_detected() {
        let mut n = necklace(TREFOIL);
        let rec = n.crossings()[1];
        for id in rec.bridges {
            let b = n.ball_mut(id).unwrap();
            b.coords = b.coords.mirror_last_axis();
        }
        let report = verify(&n, &VerifyOptions::default());
        assert_eq!(report.over_under_failures(), vec![1]);
        assert!(!report.passed());
        assert!(!report.projection_ok());
    }

    #[test]
    fn deterministic() {
        assert_eq!(necklace(TREFOIL), necklace(TREFOIL));
    }

    #[test]
    fn ball_source_round_trips() {
        for s in [BallSource::Arc(5), BallSource::Crossing(0)] {
            assert_eq!(s.to_string().parse::<BallSource>().unwrap(), s);
        }
        assert!("edge:1".parse::<BallSource>().is_err());
    }
}
