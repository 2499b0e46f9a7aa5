//! The pyramidal patchwork: the diagram graph united with its simplified
//! medial graph, embedded in the plane, plus a disk triangulation of it.
//!
//! Vertex ids: crossings are `0..n`, medial vertices (one per arc, in
//! ascending label order) are `n..3n`, auxiliary apex vertices follow.
//! Faces are stored as vertex cycles with the face interior on the left.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagram::{DiagramError, LinkDiagram, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatchworkError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRole {
    Crossing,
    Medial,
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Patchwork {
    roles: Vec<VertexRole>,
    faces: Vec<Vec<usize>>,
    outer: usize,
    edges: BTreeSet<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    crossing_star: Vec<[usize; 4]>,
    arcs: Vec<u32>,
    /// Auxiliary vertex -> the face it replaced.
    apexes: BTreeMap<usize, Vec<usize>>,
}

impl Patchwork {
    /// Builds a plane graph from its faces (each a vertex cycle with the
    /// interior on the left, the outer face included). The outer face is the
    /// one with the most vertices, ties broken by the lexicographically least
    /// canonical rotation.
    pub fn from_faces(roles: Vec<VertexRole>, faces: Vec<Vec<usize>>) -> Result<Self, PatchworkError> {
        let outer = choose_outer(&faces);
        Self::from_faces_with_outer(roles, faces, outer)
    }

    /// Like [`Patchwork::from_faces`] with the outer face given by index.
    pub fn from_faces_with_outer(
        roles: Vec<VertexRole>,
        faces: Vec<Vec<usize>>,
        outer: usize,
    ) -> Result<Self, PatchworkError> {
        let mut p = Patchwork {
            roles,
            faces,
            outer,
            edges: BTreeSet::new(),
            rotation: Vec::new(),
            crossing_star: Vec::new(),
            arcs: Vec::new(),
            apexes: BTreeMap::new(),
        };
        p.rebuild()?;
        Ok(p)
    }

    fn rebuild(&mut self) -> Result<(), PatchworkError> {
        let v = self.roles.len();
        if self.outer >= self.faces.len() {
            return Err(PatchworkError::Internal("outer face index out of range".into()));
        }
        let mut edges = BTreeSet::new();
        // Around each vertex, the neighbor after `next` (counterclockwise) is `prev`.
        let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); v];
        for face in &self.faces {
            let k = face.len();
            if k < 3 {
                return Err(PatchworkError::Internal(format!("face {face:?} has fewer than 3 vertices")));
            }
            for i in 0..k {
                let (prev, here, next) = (face[(i + k - 1) % k], face[i], face[(i + 1) % k]);
                if here >= v || prev == here {
                    return Err(PatchworkError::Internal(format!("bad face {face:?}")));
                }
                edges.insert((here.min(next), here.max(next)));
                if succ[here].insert(next, prev).is_some() {
                    return Err(PatchworkError::Internal(format!("vertex {here} has a repeated corner")));
                }
            }
        }
        let mut rotation = Vec::with_capacity(v);
        for (vertex, s) in succ.iter().enumerate() {
            let Some((&first, _)) = s.iter().next() else {
                return Err(PatchworkError::Internal(format!("vertex {vertex} lies on no face")));
            };
            let mut order = vec![first];
            let mut cur = s[&first];
            while cur != first {
                order.push(cur);
                cur = *s.get(&cur).ok_or_else(|| PatchworkError::Internal(format!("open rotation at {vertex}")))?;
                if order.len() > s.len() {
                    break;
                }
            }
            if order.len() != s.len() {
                return Err(PatchworkError::Internal(format!("vertex {vertex} is not a disk neighborhood")));
            }
            rotation.push(order);
        }
        let (nv, ne, nf) = (v as i64, edges.len() as i64, self.faces.len() as i64);
        if nv - ne + nf != 2 {
            return Err(PatchworkError::Internal(format!("embedding has Euler characteristic {}", nv - ne + nf)));
        }
        self.edges = edges;
        self.rotation = rotation;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn role(&self, v: usize) -> VertexRole {
        self.roles[v]
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// All faces, the outer one included.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn outer_face(&self) -> &[usize] {
        &self.faces[self.outer]
    }

    pub fn outer_face_index(&self) -> usize {
        self.outer
    }

    /// Counterclockwise neighbor order of `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_star.len()
    }

    /// Medial neighbors of crossing `x` in slot order `(a, b, c, d)`.
    pub fn crossing_star(&self, x: usize) -> [usize; 4] {
        self.crossing_star[x]
    }

    /// `((a, c), (b, d))`: the under-strand and over-strand medial pairs.
    pub fn strand_pairs(&self, x: usize) -> ((usize, usize), (usize, usize)) {
        let [a, b, c, d] = self.crossing_star[x];
        ((a, c), (b, d))
    }

    /// Medial vertex of arc `label`.
    pub fn medial_vertex(&self, label: u32) -> Option<usize> {
        self.arcs.binary_search(&label).ok().map(|i| self.crossing_count() + i)
    }

    /// Arc label of a medial vertex.
    pub fn arc_of(&self, v: usize) -> Option<u32> {
        if self.roles.get(v) != Some(&VertexRole::Medial) {
            return None;
        }
        self.arcs.get(v.checked_sub(self.crossing_count())?).copied()
    }

    /// Number of vertices with the given role.
    pub fn count(&self, role: VertexRole) -> usize {
        self.roles.iter().filter(|&&r| r == role).count()
    }

    /// Fans every non-triangular face other than the outer one from a new
    /// auxiliary apex vertex. Original vertices and edges are untouched.
    pub fn triangulate(&self) -> Result<Patchwork, PatchworkError> {
        let mut out = self.clone();
        out.faces.clear();
        let mut outer = 0;
        for (i, face) in self.faces.iter().enumerate() {
            if i == self.outer {
                outer = out.faces.len();
                out.faces.push(face.clone());
            } else if face.len() == 3 {
                out.faces.push(face.clone());
            } else {
                let apex = out.roles.len();
                out.roles.push(VertexRole::Auxiliary);
                for k in 0..face.len() {
                    out.faces.push(vec![apex, face[k], face[(k + 1) % face.len()]]);
                }
                out.apexes.insert(apex, face.clone());
            }
        }
        out.outer = outer;
        out.rebuild()?;
        Ok(out)
    }

    /// Removes auxiliary apex vertices, restoring the faces they replaced.
    pub fn strip_auxiliary(&self) -> Result<Patchwork, PatchworkError> {
        let mut out = self.clone();
        out.faces.clear();
        for (i, face) in self.faces.iter().enumerate() {
            if i == self.outer {
                out.outer = out.faces.len();
            }
            match self.apexes.get(&face[0]) {
                // Fans were emitted contiguously starting at the face's first vertex.
                Some(original) if face[1] == original[0] => out.faces.push(original.clone()),
                Some(_) => {}
                None => out.faces.push(face.clone()),
            }
        }
        let first_aux = self.roles.iter().position(|&r| r == VertexRole::Auxiliary).unwrap_or(self.roles.len());
        out.roles.truncate(first_aux);
        out.apexes.clear();
        out.rebuild()?;
        Ok(out)
    }

    /// Triangles of a triangulation (every face except the outer one).
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        self.faces
            .iter()
            .enumerate()
            .filter(|&(i, f)| i != self.outer && f.len() == 3)
            .map(|(_, f)| [f[0], f[1], f[2]])
            .collect()
    }

    /// True when every face other than the outer one is a triangle.
    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().enumerate().all(|(i, f)| i == self.outer || f.len() == 3)
    }
}

fn canonical(face: &[usize]) -> Vec<usize> {
    let start = (0..face.len()).min_by_key(|&i| face[i]).unwrap_or(0);
    face[start..].iter().chain(&face[..start]).copied().collect()
}

fn choose_outer(faces: &[Vec<usize>]) -> usize {
    (0..faces.len())
        .min_by(|&a, &b| {
            faces[b].len().cmp(&faces[a].len()).then_with(|| canonical(&faces[a]).cmp(&canonical(&faces[b])))
        })
        .unwrap_or(0)
}

/// Builds the pyramidal patchwork of a diagram.
pub fn build_patchwork(diagram: &LinkDiagram) -> Result<Patchwork, PatchworkError> {
    let n = diagram.crossing_count();
    let arcs: Vec<u32> = diagram.arcs().collect();
    let medial = |label: u32| n + arcs.binary_search(&label).expect("arc label present");
    let mut roles = vec![VertexRole::Crossing; n];
    roles.extend(std::iter::repeat_n(VertexRole::Medial, arcs.len()));

    let crossing_star: Vec<[usize; 4]> =
        diagram.crossings().iter().map(|x| [medial(x[0]), medial(x[1]), medial(x[2]), medial(x[3])]).collect();
    for (x, star) in crossing_star.iter().enumerate() {
        let distinct: BTreeSet<_> = star.iter().collect();
        if distinct.len() != 4 {
            return Err(DiagramError::Nugatory { crossing: x }.into());
        }
    }

    let mut faces = Vec::new();
    for (x, star) in crossing_star.iter().enumerate() {
        for s in 0..4 {
            faces.push(vec![x, star[s], star[(s + 1) % 4]]);
        }
    }
    let embedding = diagram.faces_and_embedding()?;
    for face in &embedding.faces {
        // Two-sided faces collapse onto a single medial edge.
        if face.len() >= 3 {
            faces.push(face.iter().map(|&Slot { crossing, position }| crossing_star[crossing][position]).collect());
        }
    }

    let mut p = Patchwork::from_faces(roles, faces)?;
    p.crossing_star = crossing_star;
    p.arcs = arcs;
    for x in 0..n {
        let star = p.crossing_star[x];
        let rot = p.rotation(x);
        let start = rot.iter().position(|&v| v == star[0]);
        let realized = rot.len() == 4 && start.is_some_and(|s| (0..4).all(|k| rot[(s + k) % 4] == star[k]));
        if !realized || (0..4).any(|s| !p.has_edge(star[s], star[(s + 1) % 4])) {
            return Err(PatchworkError::Internal(format!("crossing {x} does not span a square pyramid")));
        }
    }
    Ok(p)
}
