//! Randomized properties of the inversive-coordinate algebra.

use necklace::inversive::{blow_up, decode, encode, flatten, product, reflect, InversiveCoords, Shape};
use proptest::prelude::*;

fn shape(dim: usize) -> impl Strategy<Value = Shape> {
    let center = proptest::collection::vec(-1.0..1.0f64, dim);
    prop_oneof![
        4 => (center.clone(), 0.5..1.5f64).prop_map(|(center, radius)| Shape::Solid { center, radius }),
        1 => (center.clone(), 0.5..1.5f64).prop_map(|(center, radius)| Shape::Hollow { center, radius }),
        1 => (center, -1.0..1.0f64).prop_filter_map("zero normal", |(n, offset)| {
            let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            (len > 1e-3).then(|| Shape::HalfSpace { normal: n.iter().map(|x| x / len).collect(), offset })
        }),
    ]
}

fn coords(dim: usize) -> impl Strategy<Value = InversiveCoords> {
    shape(dim).prop_map(|s| encode(&s).unwrap())
}

fn max_diff(a: &InversiveCoords, b: &InversiveCoords) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn encoded_shapes_are_normalized(v in coords(3)) {
        prop_assert!((product(&v, &v).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn blow_up_preserves_products(a in coords(2), b in coords(2)) {
        let (ba, bb) = (blow_up(&a).unwrap(), blow_up(&b).unwrap());
        prop_assert!((product(&a, &b).unwrap() - product(&ba, &bb).unwrap()).abs() <= 1e-12);
        prop_assert_eq!(flatten(&ba).unwrap(), a);
    }

    #[test]
    fn reflection_is_an_involution(u in coords(3), m in coords(3)) {
        let twice = reflect(&reflect(&u, &m).unwrap(), &m).unwrap();
        prop_assert!(max_diff(&twice, &u) <= 1e-12);
    }

    #[test]
    fn reflection_preserves_products(u in coords(3), w in coords(3), m in coords(3)) {
        let (ru, rw) = (reflect(&u, &m).unwrap(), reflect(&w, &m).unwrap());
        prop_assert!((product(&ru, &rw).unwrap() - product(&u, &w).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn encode_decode_round_trip(s in shape(3)) {
        let v = encode(&s).unwrap();
        let back = decode(&v).unwrap();
        match (&s, &back) {
            (Shape::Solid { center: c, radius: r }, Shape::Solid { center: c2, radius: r2 })
            | (Shape::Hollow { center: c, radius: r }, Shape::Hollow { center: c2, radius: r2 }) => {
                prop_assert!(c.iter().zip(c2).all(|(x, y)| (x - y).abs() <= 1e-9));
                prop_assert!((r - r2).abs() <= 1e-9 * r);
            }
            (Shape::HalfSpace { normal: n, offset: o }, Shape::HalfSpace { normal: n2, offset: o2 }) => {
                prop_assert!(n.iter().zip(n2).all(|(x, y)| (x - y).abs() <= 1e-9));
                prop_assert!((o - o2).abs() <= 1e-9);
            }
            _ => prop_assert!(false, "{:?} decoded as {:?}", s, back),
        }
        prop_assert!(max_diff(&encode(&back).unwrap(), &v) <= 1e-9);
    }
}
