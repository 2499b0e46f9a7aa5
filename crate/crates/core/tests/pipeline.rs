//! Pipeline properties over the shipped example diagrams.

use std::collections::BTreeSet;

use necklace::diagram::{parse_pd, LinkDiagram};
use necklace::inversive::product;
use necklace::io::{export, Format, NecklaceDocument};
use necklace::necklace::{assemble, extract_thread, AssembleOptions, BallRole, Necklace};
use necklace::patchwork::build_patchwork;

const NAMES: [&str; 5] = ["trefoil", "hopf", "figure_eight", "link_7_3_1", "knot_8_17"];

fn diagram(name: &str) -> LinkDiagram {
    let path = format!("{}/../../diagrams/{name}.pd", env!("CARGO_MANIFEST_DIR"));
    parse_pd(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn build(name: &str) -> Necklace {
    assemble(&diagram(name), &AssembleOptions::default()).unwrap()
}

#[test]
fn role_counts_follow_the_crossing_count() {
    for name in NAMES {
        let n = build(name);
        let x = n.diagram().crossing_count();
        assert_eq!(n.count(BallRole::Medial), 2 * x, "{name}");
        assert_eq!(n.count(BallRole::CrossingCenter), x, "{name}");
        assert_eq!(n.count(BallRole::Bridge), 2 * x, "{name}");
    }
}

#[test]
fn threads_are_hamiltonian_cycles_of_the_tangency_graph() {
    for name in NAMES {
        let n = build(name);
        assert_eq!(n.threads().len(), n.diagram().components().len());
        let mut seen = BTreeSet::new();
        for t in n.threads() {
            for (k, &id) in t.iter().enumerate() {
                assert!(seen.insert(id), "{name}: ball {id} on two threads");
                let next = &n.balls()[t[(k + 1) % t.len()]].coords;
                let p = product(&n.balls()[id].coords, next).unwrap();
                assert!((p + 1.0).abs() < 1e-3, "{name}: {p}");
            }
        }
        assert_eq!(seen.len(), n.balls().len(), "{name}: threads cover every ball");
        assert_eq!(extract_thread(&n, 1e-3).unwrap(), n.threads());
    }
}

#[test]
fn link_components_and_patchwork_sizes() {
    let counts = [(3, 1), (2, 2), (4, 1), (7, 3), (8, 1)];
    for (name, (x, c)) in NAMES.iter().zip(counts) {
        let d = diagram(name);
        assert_eq!((d.crossing_count(), d.components().len()), (x, c), "{name}");
        assert_eq!(build_patchwork(&d).unwrap().vertex_count(), 3 * x);
    }
}

#[test]
fn assembly_is_bit_identical_across_runs() {
    for name in NAMES {
        assert_eq!(export(&build(name), Format::Json).unwrap(), export(&build(name), Format::Json).unwrap());
    }
}

#[test]
fn csv_rows_match_ball_counts() {
    for (name, rows) in [("trefoil", 15), ("knot_8_17", 40)] {
        let csv = String::from_utf8(export(&build(name), Format::Csv).unwrap()).unwrap();
        assert_eq!(csv.lines().count() - 1, rows);
    }
}

#[test]
fn outer_radius_scales_the_necklace() {
    let base = build("figure_eight");
    let options = AssembleOptions { outer_radius: 3.0, ..AssembleOptions::default() };
    let scaled = assemble(&diagram("figure_eight"), &options).unwrap();
    let (a, b) = (NecklaceDocument::from_necklace(&base), NecklaceDocument::from_necklace(&scaled));
    for (p, q) in a.balls.iter().zip(&b.balls) {
        for (u, v) in [(p.x, q.x), (p.y, q.y), (p.z, q.z), (p.r, q.r)] {
            assert!((3.0 * u - v).abs() <= 1e-6 * (1.0 + v.abs()), "{u} {v}");
        }
    }
}
