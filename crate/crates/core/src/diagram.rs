//! Link diagrams in planar-diagram (PD) notation.
//!
//! Each crossing is a tuple `X(a,b,c,d)` of arc labels listed counterclockwise,
//! starting from the incoming under-strand. The under-strand runs `a -> c`; the
//! over-strand occupies slots `b` and `d`, and its direction is inferred from the
//! component it belongs to.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("arc label {label} appears {count} time(s); every label must appear exactly twice")]
    Label { label: u32, count: usize },
    #[error("crossing {crossing} is nugatory")]
    Nugatory { crossing: usize },
    #[error("diagram is not planar (V - E + F = {euler})")]
    NonPlanar { euler: i64 },
    #[error("diagram is disconnected ({pieces} pieces)")]
    Disconnected { pieces: usize },
    #[error("inconsistent under-strand orientation at crossing {crossing}")]
    Orientation { crossing: usize },
    #[error("diagram has no crossings")]
    Empty,
}

/// One of the four arc-ends at a crossing; `position` 0..4 indexes `(a,b,c,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub crossing: usize,
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strand {
    Over,
    Under,
}

impl Strand {
    pub fn flip(self) -> Self {
        match self {
            Strand::Over => Strand::Under,
            Strand::Under => Strand::Over,
        }
    }
}

/// A strand passing through a crossing, entering at slot `entry` and leaving
/// at the opposite slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pass {
    pub crossing: usize,
    pub entry: usize,
}

impl Pass {
    pub fn exit(&self) -> usize {
        (self.entry + 2) % 4
    }

    pub fn strand(&self) -> Strand {
        if self.entry.is_multiple_of(2) {
            Strand::Under
        } else {
            Strand::Over
        }
    }
}

/// An oriented link component: `passes[k]` joins `arcs[k]` to `arcs[(k+1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub arcs: Vec<u32>,
    pub passes: Vec<Pass>,
}

/// Gauss sequence of one component: crossing index plus over/under per pass.
pub type GaussSequence = Vec<(usize, Strand)>;

/// Rotation system and faces of the underlying 4-regular plane graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// Arc labels around each crossing, counterclockwise.
    pub rotation: Vec<[u32; 4]>,
    /// Faces as cyclic dart lists. A dart is the slot through which its arc
    /// leaves the crossing; faces keep their interior on the left.
    pub faces: Vec<Vec<Slot>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    ends: BTreeMap<u32, [Slot; 2]>,
    components: Vec<Component>,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            return Err(DiagramError::Empty);
        }
        let mut occurrences: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (i, x) in crossings.iter().enumerate() {
            for (p, &label) in x.iter().enumerate() {
                occurrences.entry(label).or_default().push(Slot { crossing: i, position: p });
            }
        }
        let mut ends = BTreeMap::new();
        for (&label, slots) in &occurrences {
            if slots.len() != 2 {
                return Err(DiagramError::Label { label, count: slots.len() });
            }
            ends.insert(label, [slots[0], slots[1]]);
        }
        for (i, x) in crossings.iter().enumerate() {
            for p in 0..4 {
                if x[(p + 1)..].contains(&x[p]) {
                    return Err(DiagramError::Nugatory { crossing: i });
                }
            }
        }

        let mut diagram = LinkDiagram { crossings, ends, components: Vec::new() };
        let pieces = diagram.pieces(None);
        if pieces != 1 {
            return Err(DiagramError::Disconnected { pieces });
        }
        diagram.components = diagram.walk_components()?;
        let embedding = diagram.faces_and_embedding()?;
        let euler = diagram.crossing_count() as i64 - diagram.arc_count() as i64
            + embedding.faces.len() as i64;
        if euler != 2 {
            return Err(DiagramError::NonPlanar { euler });
        }
        // A crossing whose removal disconnects the rest is a cut vertex of the
        // 4-regular graph, i.e. nugatory.
        if diagram.crossing_count() > 1 {
            for x in 0..diagram.crossing_count() {
                if diagram.pieces(Some(x)) > 1 {
                    return Err(DiagramError::Nugatory { crossing: x });
                }
            }
        }
        Ok(diagram)
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.ends.len()
    }

    /// Arc labels in ascending order.
    pub fn arcs(&self) -> impl Iterator<Item = u32> + '_ {
        self.ends.keys().copied()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// The two arc-ends of `label`.
    pub fn arc_ends(&self, label: u32) -> Option<[Slot; 2]> {
        self.ends.get(&label).copied()
    }

    pub fn label_at(&self, slot: Slot) -> u32 {
        self.crossings[slot.crossing][slot.position]
    }

    /// The arc-end joined to `slot` by its arc.
    pub fn opposite_end(&self, slot: Slot) -> Slot {
        let [s, t] = self.ends[&self.label_at(slot)];
        if s == slot {
            t
        } else {
            s
        }
    }

    pub fn gauss_sequences(&self) -> Vec<GaussSequence> {
        self.components
            .iter()
            .map(|c| c.passes.iter().map(|p| (p.crossing, p.strand())).collect())
            .collect()
    }

    /// Traces faces by turning to the clockwise-next slot at each crossing.
    pub fn faces_and_embedding(&self) -> Result<Embedding, DiagramError> {
        let n = self.crossing_count();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for x in 0..n {
            for p in 0..4 {
                if seen[x][p] {
                    continue;
                }
                let start = Slot { crossing: x, position: p };
                let mut face = Vec::new();
                let mut dart = start;
                loop {
                    if seen[dart.crossing][dart.position] {
                        if dart == start {
                            break;
                        }
                        let euler = n as i64 - self.arc_count() as i64 + faces.len() as i64;
                        return Err(DiagramError::NonPlanar { euler });
                    }
                    seen[dart.crossing][dart.position] = true;
                    face.push(dart);
                    let arrive = self.opposite_end(dart);
                    dart = Slot { crossing: arrive.crossing, position: (arrive.position + 3) % 4 };
                }
                faces.push(face);
            }
        }
        Ok(Embedding { rotation: self.crossings.clone(), faces })
    }

    fn pieces(&self, removed: Option<usize>) -> usize {
        let n = self.crossing_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for [s, t] in self.ends.values() {
            if Some(s.crossing) == removed || Some(t.crossing) == removed {
                continue;
            }
            let (a, b) = (find(&mut parent, s.crossing), find(&mut parent, t.crossing));
            parent[a] = b;
        }
        (0..n)
            .filter(|&i| Some(i) != removed)
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }

    fn walk_components(&self) -> Result<Vec<Component>, DiagramError> {
        let n = self.crossing_count();
        let mut used = vec![[false; 4]; n];
        let mut components = Vec::new();
        // Components with an under-pass are oriented by it; the rest enter at `b`.
        for entry in [0usize, 1] {
            for x in 0..n {
                if used[x][entry] || used[x][(entry + 2) % 4] {
                    continue;
                }
                let start = Pass { crossing: x, entry };
                let mut pass = start;
                let mut arcs = Vec::new();
                let mut passes = Vec::new();
                loop {
                    used[pass.crossing][pass.entry] = true;
                    used[pass.crossing][pass.exit()] = true;
                    arcs.push(self.crossings[pass.crossing][pass.entry]);
                    passes.push(pass);
                    let next = self.opposite_end(Slot { crossing: pass.crossing, position: pass.exit() });
                    if next.position == 2 {
                        return Err(DiagramError::Orientation { crossing: next.crossing });
                    }
                    pass = Pass { crossing: next.crossing, entry: next.position };
                    if pass == start {
                        break;
                    }
                    if used[pass.crossing][pass.entry] {
                        return Err(DiagramError::Orientation { crossing: pass.crossing });
                    }
                }
                components.push(Component { arcs, passes });
            }
        }
        Ok(components)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LinkDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

/// Parses whitespace- or comma-separated `X(a,b,c,d)` tokens. Lines whose first
/// non-blank character is `#` are comments. Square brackets are accepted in
/// place of parentheses.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut crossings = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.trim_start().starts_with('#') {
            parse_line(line, offset, &mut crossings)?;
        }
        offset += line.len();
    }
    LinkDiagram::new(crossings)
}

fn parse_line(line: &str, base: usize, out: &mut Vec<[u32; 4]>) -> Result<(), DiagramError> {
    let bytes = line.as_bytes();
    let err = |at: usize, message: &str| DiagramError::Syntax { offset: base + at, message: message.to_string() };
    let skip_ws = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };
    let mut i = 0;
    loop {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b',') {
            i += 1;
        }
        if i == bytes.len() {
            return Ok(());
        }
        if bytes[i] != b'X' {
            return Err(err(i, "expected 'X'"));
        }
        i = skip_ws(i + 1);
        let close = match bytes.get(i) {
            Some(b'(') => b')',
            Some(b'[') => b']',
            _ => return Err(err(i, "expected '(' after 'X'")),
        };
        let mut labels = [0u32; 4];
        for (k, label) in labels.iter_mut().enumerate() {
            i = skip_ws(i + 1);
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(err(start, "expected a positive integer label"));
            }
            *label = line[start..i].parse().map_err(|_| err(start, "label out of range"))?;
            if *label == 0 {
                return Err(err(start, "labels must be positive"));
            }
            i = skip_ws(i);
            let want = if k < 3 { b',' } else { close };
            if bytes.get(i) != Some(&want) {
                return Err(err(i, if k < 3 { "expected ','" } else { "unterminated crossing" }));
            }
        }
        out.push(labels);
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    #[test]
    fn trefoil_counts() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.components()[0].arcs.len(), 6);
        // passes[k] joins arcs[k] to arcs[k+1]
        let c = &d.components()[0];
        for (k, pass) in c.passes.iter().enumerate() {
            let x = d.crossings()[pass.crossing];
            assert_eq!(x[pass.entry], c.arcs[k]);
            assert_eq!(x[pass.exit()], c.arcs[(k + 1) % c.arcs.len()]);
        }
    }

    #[test]
    fn hopf_components() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.arc_count(), 4);
        let comps = d.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.arcs.len() == 2));
    }

    #[test]
    fn face_counts_follow_euler() {
        for (pd, v, e, f) in [(TREFOIL, 3, 6, 5), (HOPF, 2, 4, 4), (FIGURE_EIGHT, 4, 8, 6)] {
            let d = parse_pd(pd).unwrap();
            let emb = d.faces_and_embedding().unwrap();
            assert_eq!((d.crossing_count(), d.arc_count(), emb.faces.len()), (v, e, f), "{pd}");
            let darts: usize = emb.faces.iter().map(Vec::len).sum();
            assert_eq!(darts, 4 * v);
        }
    }

    #[test]
    fn trefoil_face_sizes() {
        let d = parse_pd(TREFOIL).unwrap();
        let mut sizes: Vec<_> = d.faces_and_embedding().unwrap().faces.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 3, 3]);
    }

    #[test]
    fn component_walk_alternates_for_alternating_knot() {
        let d = parse_pd(TREFOIL).unwrap();
        let seq = &d.gauss_sequences()[0];
        for w in seq.windows(2) {
            assert_ne!(w[0].1, w[1].1);
        }
        let mut visits = vec![0; 3];
        for (x, _) in seq {
            visits[*x] += 1;
        }
        assert_eq!(visits, vec![2, 2, 2]);
    }

    #[test]
    fn rejects_nugatory_repeated_label() {
        assert_eq!(parse_pd("X(1,1,2,2)"), Err(DiagramError::Nugatory { crossing: 0 }));
    }

    #[test]
    fn rejects_cut_vertex_crossing() {
        // Two trefoils joined through one crossing whose removal splits them.
        let joined = "X(1,4,2,5) X(3,7,4,1) X(5,2,6,3) \
                      X(8,11,9,12) X(10,13,11,14) X(12,9,13,10) X(6,7,8,14)";
        assert_eq!(parse_pd(joined), Err(DiagramError::Nugatory { crossing: 6 }));
        assert!(parse_pd(FIGURE_EIGHT).is_ok());
    }

    #[test]
    fn rejects_bad_labels() {
        assert_eq!(
            parse_pd("X(1,2,3,4) X(1,2,3,5)"),
            Err(DiagramError::Label { label: 4, count: 1 })
        );
    }

    #[test]
    fn rejects_disconnected() {
        let two = format!("{TREFOIL} X(11,14,12,15) X(13,16,14,11) X(15,12,16,13)");
        assert_eq!(parse_pd(&two), Err(DiagramError::Disconnected { pieces: 2 }));
    }

    #[test]
    fn syntax_errors_report_offsets() {
        match parse_pd("X(1,4,2,5) Y(3,6,4,1)") {
            Err(DiagramError::Syntax { offset, .. }) => assert_eq!(offset, 11),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pd("X(1,4,2"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(0,1,1,0)"), Err(DiagramError::Syntax { .. })));
    }

    #[test]
    fn comments_and_separators() {
        let text = "# trefoil\nX[1,4,2,5],X(3, 6, 4, 1)\n  # x\nX(5,2,6,3)\n";
        let d = parse_pd(text).unwrap();
        assert_eq!(d.to_string(), TREFOIL);
    }

    #[test]
    fn display_round_trips() {
        for pd in [TREFOIL, HOPF, FIGURE_EIGHT] {
            let d = parse_pd(pd).unwrap();
            assert_eq!(parse_pd(&d.to_string()).unwrap(), d);
        }
    }
}
