//! Combinatorial round trip: project the threads to the base plane, find
//! their crossings, and compare the resulting Gauss sequences (with over/under
//! and crossing signs) against the input diagram.

use std::fmt;

use super::Necklace;
use crate::diagram::Strand;

/// Relative tolerance below which two segments count as parallel.
const COLLINEAR: f64 = 1e-9;
/// Crossings closer than this (in the plane or along a thread) are ambiguous.
const SEPARATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionOutcome {
    Match,
    Mismatch(String),
    Inconclusive(String),
    Skipped,
}

impl fmt::Display for ProjectionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionOutcome::Match => write!(f, "Gauss sequences match the diagram"),
            ProjectionOutcome::Mismatch(m) => write!(f, "mismatch: {m}"),
            ProjectionOutcome::Inconclusive(m) => write!(f, "inconclusive: {m}"),
            ProjectionOutcome::Skipped => write!(f, "skipped"),
        }
    }
}

/// A crossing of two projected thread segments. Positions are
/// `segment index + parameter` along the respective thread.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedCrossing {
    pub point: [f64; 2],
    pub over: (usize, f64),
    pub under: (usize, f64),
    /// Sign of `under_direction × over_direction`.
    pub sign: i8,
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn touch(a: usize, b: usize) -> String {
    format!("thread {a} touches thread {b} at a vertex without crossing")
}

/// For a thread whose vertex `i` lies on the line through `origin` with
/// direction `dir`: the through-direction at the vertex if the thread passes
/// from one side of the line to the other, `None` if it only touches.
fn through_vertex(line: &[[f64; 3]], i: usize, origin: [f64; 3], dir: [f64; 2]) -> Option<[f64; 2]> {
    let prev = line[(i + line.len() - 1) % line.len()];
    let next = line[(i + 1) % line.len()];
    let side = |p: [f64; 3]| cross(dir, sub(p, origin));
    let scale = dir[0].hypot(dir[1]);
    let (a, b) = (side(prev), side(next));
    if a * b < 0.0 && a.abs().min(b.abs()) > COLLINEAR * scale {
        Some(sub(next, prev))
    } else {
        None
    }
}

/// Finds all transverse crossings of the closed polylines projected to the
/// xy-plane. Returns an explanation when the projection is degenerate.
pub fn project_threads(polylines: &[Vec<[f64; 3]>]) -> Result<Vec<ProjectedCrossing>, String> {
    let segments: Vec<(usize, usize, [f64; 3], [f64; 3])> = polylines
        .iter()
        .enumerate()
        .flat_map(|(t, line)| (0..line.len()).map(move |i| (t, i, line[i], line[(i + 1) % line.len()])))
        .collect();
    let mut found = Vec::new();
    for (ai, &(ta, sa, p1, p2)) in segments.iter().enumerate() {
        for &(tb, sb, q1, q2) in &segments[ai + 1..] {
            if ta == tb {
                let len = polylines[ta].len();
                if (sa + 1) % len == sb || (sb + 1) % len == sa {
                    continue;
                }
            }
            let (r, s) = (sub(p2, p1), sub(q2, q1));
            let denom = cross(r, s);
            let qp = sub(q1, p1);
            let scale = (r[0].hypot(r[1])) * (s[0].hypot(s[1]));
            if denom.abs() <= COLLINEAR * scale {
                if cross(qp, r).abs() <= COLLINEAR * scale.max(1e-300) {
                    // Collinear: overlapping projections cannot be classified.
                    let rr = r[0] * r[0] + r[1] * r[1];
                    let t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr;
                    let t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr;
                    if t0.max(t1) >= 0.0 && t0.min(t1) <= 1.0 {
                        return Err(format!("segments {sa} of thread {ta} and {sb} of thread {tb} overlap"));
                    }
                }
                continue;
            }
            let t = cross(qp, s) / denom;
            let u = cross(qp, r) / denom;
            if !(-COLLINEAR..=1.0 + COLLINEAR).contains(&t) || !(-COLLINEAR..=1.0 + COLLINEAR).contains(&u) {
                continue;
            }
            let at_end = |x: f64| x > 1.0 - COLLINEAR;
            let at_start = |x: f64| x < COLLINEAR;
            if at_end(t) || at_end(u) {
                // Counted on the following segment, where the parameter is 0.
                continue;
            }
            let (mut r, mut s) = (r, s);
            match (at_start(t), at_start(u)) {
                (true, true) => return Err(format!("threads {ta} and {tb} cross at a common vertex")),
                (true, false) => r = through_vertex(&polylines[ta], sa, q1, s).ok_or_else(|| touch(ta, tb))?,
                (false, true) => s = through_vertex(&polylines[tb], sb, p1, r).ok_or_else(|| touch(tb, ta))?,
                (false, false) => {}
            }
            let za = p1[2] + t * (p2[2] - p1[2]);
            let zb = q1[2] + u * (q2[2] - q1[2]);
            if (za - zb).abs() <= SEPARATION {
                return Err(format!("threads {ta} and {tb} meet in space near segment {sa}/{sb}"));
            }
            let point = [p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1])];
            let a = (ta, sa as f64 + t);
            let b = (tb, sb as f64 + u);
            let (over, under, over_dir, under_dir) = if za > zb { (a, b, r, s) } else { (b, a, s, r) };
            let sign = if cross(under_dir, over_dir) > 0.0 { 1 } else { -1 };
            found.push(ProjectedCrossing { point, over, under, sign });
        }
    }
    for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            let (a, b) = (found[i].point, found[j].point);
            if (a[0] - b[0]).hypot(a[1] - b[1]) < SEPARATION {
                return Err("two projected crossings nearly coincide".into());
            }
        }
    }
    Ok(found)
}

/// Geometric Gauss sequences: per thread, crossing indices with strand.
fn sequences(crossings: &[ProjectedCrossing], threads: usize) -> Vec<Vec<(usize, Strand)>> {
    let mut entries: Vec<Vec<(f64, usize, Strand)>> = vec![Vec::new(); threads];
    for (g, c) in crossings.iter().enumerate() {
        entries[c.over.0].push((c.over.1, g, Strand::Over));
        entries[c.under.0].push((c.under.1, g, Strand::Under));
    }
    entries
        .into_iter()
        .map(|mut e| {
            e.sort_by(|a, b| a.0.total_cmp(&b.0));
            e.into_iter().map(|(_, g, s)| (g, s)).collect()
        })
        .collect()
}

struct Matcher<'a> {
    geo: &'a [Vec<(usize, Strand)>],
    diagram: &'a [Vec<(usize, Strand)>],
    geo_to_diagram: Vec<Option<usize>>,
    diagram_to_geo: Vec<Option<usize>>,
    reversed: Vec<bool>,
}

impl Matcher<'_> {
    fn search(&mut self, k: usize, accept: &mut dyn FnMut(&Self) -> bool) -> bool {
        if k == self.geo.len() {
            return accept(self);
        }
        let (g, d) = (&self.geo[k], &self.diagram[k]);
        if g.len() != d.len() {
            return false;
        }
        let len = g.len();
        for rev in [false, true] {
            for offset in 0..len.max(1) {
                let saved = (self.geo_to_diagram.clone(), self.diagram_to_geo.clone());
                let mut ok = true;
                for i in 0..len {
                    let j = if rev { (offset + len - i) % len } else { (offset + i) % len };
                    let ((gx, gs), (dx, ds)) = (g[j], d[i]);
                    if gs != ds {
                        ok = false;
                        break;
                    }
                    match (self.geo_to_diagram[gx], self.diagram_to_geo[dx]) {
                        (None, None) => {
                            self.geo_to_diagram[gx] = Some(dx);
                            self.diagram_to_geo[dx] = Some(gx);
                        }
                        (Some(a), Some(b)) if a == dx && b == gx => {}
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    self.reversed[k] = rev;
                    if self.search(k + 1, accept) {
                        return true;
                    }
                }
                (self.geo_to_diagram, self.diagram_to_geo) = saved;
            }
        }
        false
    }
}

/// Compares projected crossings against the diagram's Gauss sequences, up
/// to crossing relabeling and per-component rotation and reversal, and the
/// crossing signs (adjusted for reversed components).
pub(crate) fn compare(
    crossings: &[ProjectedCrossing],
    diagram_sequences: &[Vec<(usize, Strand)>],
    diagram_signs: &[i8],
) -> ProjectionOutcome {
    let n = diagram_signs.len();
    if crossings.len() != n {
        return ProjectionOutcome::Mismatch(format!("{} projected crossings for {n} diagram crossings", crossings.len()));
    }
    let geo = sequences(crossings, diagram_sequences.len());
    let mut m = Matcher {
        geo: &geo,
        diagram: diagram_sequences,
        geo_to_diagram: vec![None; n],
        diagram_to_geo: vec![None; n],
        reversed: vec![false; geo.len()],
    };
    let mut gauss_only = false;
    let found = m.search(0, &mut |m| {
        gauss_only = true;
        crossings.iter().enumerate().all(|(g, c)| {
            let flip = m.reversed[c.over.0] != m.reversed[c.under.0];
            let sign = if flip { -c.sign } else { c.sign };
            m.geo_to_diagram[g].is_some_and(|x| diagram_signs[x] == sign)
        })
    });
    if found {
        ProjectionOutcome::Match
    } else if gauss_only {
        ProjectionOutcome::Mismatch("Gauss sequences agree but crossing signs differ".into())
    } else {
        ProjectionOutcome::Mismatch("Gauss sequences differ".into())
    }
}

/// The closed polyline through the contact points of consecutive balls of
/// each thread. Each chord lies inside one ball, so the polyline is isotopic
/// to the necklace.
pub fn thread_polylines(necklace: &Necklace) -> Vec<Vec<[f64; 3]>> {
    let balls = necklace.balls();
    necklace
        .threads()
        .iter()
        .map(|t| {
            (0..t.len())
                .map(|i| {
                    let (a, b) = (&balls[t[i]], &balls[t[(i + 1) % t.len()]]);
                    let (ca, cb, ra, rb) = (a.center(), b.center(), a.radius(), b.radius());
                    std::array::from_fn(|k| (rb * ca[k] + ra * cb[k]) / (ra + rb))
                })
                .collect()
        })
        .collect()
}

pub(crate) fn round_trip(necklace: &Necklace) -> ProjectionOutcome {
    let lines = thread_polylines(necklace);
    let crossings = match project_threads(&lines) {
        Ok(c) => c,
        Err(reason) => return ProjectionOutcome::Inconclusive(reason),
    };
    let diagram = necklace.diagram();
    let mut signs = vec![0i8; diagram.crossing_count()];
    for comp in diagram.components() {
        for pass in &comp.passes {
            if pass.entry % 2 == 1 {
                // Over-strand running b -> d is positive.
                signs[pass.crossing] = if pass.entry == 1 { 1 } else { -1 };
            }
        }
    }
    compare(&crossings, &diagram.gauss_sequences(), &signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(z_over: f64) -> Vec<Vec<[f64; 3]>> {
        // Two "linked" rectangles: a flat one and one bridging over/under it.
        let a = vec![[0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [4.0, 2.0, 0.0], [0.0, 2.0, 0.0]];
        let b = vec![[2.0, 1.5, z_over], [2.0, -1.0, z_over], [6.0, -1.0, -z_over], [6.0, 1.0, -z_over], [3.0, 1.0, -z_over]];
        vec![a, b]
    }

    #[test]
    fn finds_two_crossings_with_heights() {
        let c = project_threads(&square(1.0)).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().any(|x| x.over.0 == 1) && c.iter().any(|x| x.over.0 == 0));
    }

    #[test]
    fn vertex_to_vertex_hits_are_inconclusive() {
        let a = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]];
        let b = vec![[1.0, -1.0, 1.0], [1.0, 0.0, 1.0], [3.0, 3.0, 1.0]];
        assert!(project_threads(&[a, b]).is_err());
    }

    #[test]
    fn crossing_through_a_vertex_counts_once() {
        let a = vec![[0.0, -1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-5.0, 1.0, 0.0], [-5.0, -1.0, 0.0]];
        let b = vec![[-1.0, 0.0, 1.0], [1.0, 0.0, 1.0], [1.0, 5.0, 1.0], [-1.0, 5.0, 1.0]];
        let c = project_threads(&[a, b.clone()]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.iter().filter(|x| x.point[0].abs() < 1e-12 && x.point[1].abs() < 1e-12).count(), 1);
        // Touching the line without passing through it is rejected.
        let touch = vec![[0.0, -1.0, 0.0], [0.0, 0.0, 0.0], [1.0, -1.0, 0.0]];
        assert!(project_threads(&[touch, b]).is_err());
    }

    #[test]
    fn compare_detects_flipped_strand() {
        let crossings = project_threads(&square(1.0)).unwrap();
        let seq = sequences(&crossings, 2);
        let signs: Vec<i8> = crossings.iter().map(|c| c.sign).collect();
        assert_eq!(compare(&crossings, &seq, &signs), ProjectionOutcome::Match);
        let mut flipped = crossings.clone();
        let c = &mut flipped[0];
        (c.over, c.under) = (c.under, c.over);
        c.sign = -c.sign;
        assert!(matches!(compare(&flipped, &seq, &signs), ProjectionOutcome::Mismatch(_)));
        let mut negated = signs.clone();
        negated[0] = -negated[0];
        assert!(matches!(compare(&crossings, &seq, &negated), ProjectionOutcome::Mismatch(_)));
    }
}
