mod common;

use std::collections::BTreeMap;

use common::{min_cycle_weight, primitive_vectors_up_to_sign, three_square_l_holonomies};
use lamina_core::catalog::{golden_l, golden_l_rotated, pillowcase, st2, GOLDEN_L_FSF, PILLOWCASE_FSF, ST2_FSF};
use lamina_core::flat::format::{parse_surface, write_surface, SurfaceFileError};
use lamina_core::flat::{
    disjoint, disjoint_system_alpha, horocycle_average, in_k_epsilon, kruskal_threshold, max_disjoint_family, saddle_connections,
    systole_lower_bound, Alpha, FlatError, FlatSurface, FlowState, Mat2, SaddleConnection, Vec2,
};
use lamina_core::scalar::{int, rat, Golden, Rational, Scalar};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn integer_holonomies(conns: &[SaddleConnection<Rational>]) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for c in conns {
        let h = &c.base_holonomy;
        assert!(h.x.is_integer() && h.y.is_integer(), "non-lattice holonomy {:?}", h);
        let key = (h.x.to_integer().to_i64().unwrap(), h.y.to_integer().to_i64().unwrap());
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

fn alpha_length(a: Alpha) -> f64 {
    match a {
        Alpha::Value { length, .. } => length,
        Alpha::Unbounded => f64::INFINITY,
    }
}

fn f64_state(s: &FlatSurface<Rational>) -> FlowState<f64> {
    FlowState::new(s.to_f64(1e-9).unwrap())
}

#[test]
fn cone_census_of_fixtures() {
    let s = st2();
    assert_eq!(s.cone_points().iter().map(|c| c.k).collect::<Vec<_>>(), vec![6]);
    assert_eq!(s.genus(), 2);
    assert_eq!(s.area(), int(3));
    assert!(s.is_translation_surface());
    assert_eq!(s.disjointness_cap(), 9);

    let g = golden_l();
    assert_eq!(g.cone_points().iter().map(|c| c.k).collect::<Vec<_>>(), vec![6]);
    assert_eq!(g.genus(), 2);
    assert_eq!(g.area(), Golden::new(int(0), int(1)));

    let p = pillowcase();
    assert_eq!(p.cone_points().iter().map(|c| c.k).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    assert_eq!(p.genus(), 0);
    assert!(!p.is_translation_surface());

    let r = golden_l_rotated();
    assert!((r.area() - 1.0).abs() < 1e-12);
    assert_eq!(r.genus(), 2);
}

#[test]
fn fixtures_round_trip() {
    for text in [ST2_FSF, PILLOWCASE_FSF] {
        let s: FlatSurface<Rational> = parse_surface(text, 0.0).unwrap();
        let again: FlatSurface<Rational> = parse_surface(&write_surface(&s), 0.0).unwrap();
        assert_eq!(s, again);
        assert_eq!(write_surface(&again), write_surface(&s));
    }
    let g: FlatSurface<Golden> = parse_surface(GOLDEN_L_FSF, 0.0).unwrap();
    let again: FlatSurface<Golden> = parse_surface(&write_surface(&g), 0.0).unwrap();
    assert_eq!(g, again);
    let r = golden_l_rotated();
    let again: FlatSurface<f64> = parse_surface(&write_surface(&r), r.tol()).unwrap();
    assert_eq!(write_surface(&again), write_surface(&r));
}

#[test]
fn surface_errors() {
    let parse = |t: &str| parse_surface::<Rational>(t, 0.0);
    let surf = |t: &str| match parse(t) {
        Err(SurfaceFileError::Surface(e)) => e,
        other => panic!("expected a surface error, got {:?}", other.map(|_| ())),
    };
    // clockwise square
    assert_eq!(
        surf("fsf 1\npolygon 0 (0,0) (0,1) (1,1) (1,0)\nglue 0:0 0:2 translation\nglue 0:1 0:3 translation\n"),
        FlatError::Orientation(0)
    );
    // an unglued edge
    assert!(matches!(
        surf("fsf 1\npolygon 0 (0,0) (1,0) (1,1) (0,1)\nglue 0:0 0:2 translation\n"),
        FlatError::Matching { .. }
    ));
    // lengths differ
    assert!(matches!(
        surf("fsf 1\npolygon 0 (0,0) (2,0) (2,1) (0,1)\nglue 0:0 0:1 translation\nglue 0:2 0:3 translation\n"),
        FlatError::Incompatible(..)
    ));
    // the flat torus has a single regular vertex
    assert_eq!(
        surf("fsf 1\npolygon 0 (0,0) (1,0) (1,1) (0,1)\nglue 0:0 0:2 translation\nglue 0:1 0:3 translation\n"),
        FlatError::RegularVertex { point: 0 }
    );
    assert_eq!(surf("fsf 1\n"), FlatError::Empty);
    match parse("fsf 1\npolygon 0 (0,0) (1,0) (1;1)\n") {
        Err(SurfaceFileError::Parse(e)) => assert_eq!(e.line, 2),
        other => panic!("unexpected {:?}", other.map(|_| ())),
    }
    match parse("fsf 1\nglue 0:0 0:1 sideways\n") {
        Err(SurfaceFileError::Parse(e)) => assert_eq!(e.line, 2),
        other => panic!("unexpected {:?}", other.map(|_| ())),
    }
    match parse("fsf 1\nfield Q(sqrt5)\n") {
        Err(SurfaceFileError::Parse(e)) => assert_eq!(e.line, 2),
        other => panic!("unexpected {:?}", other.map(|_| ())),
    }
}

#[test]
fn st2_unit_connections() {
    let conns = saddle_connections(&FlowState::new(st2()), int(1)).unwrap();
    assert_eq!(conns.len(), 6);
    assert_eq!(conns.iter().filter(|c| c.is_horizontal(0.0)).count(), 3);
    let vertical = conns.iter().filter(|c| c.holonomy == Vec2::new(int(0), int(1))).count();
    assert_eq!(vertical, 3);
    assert!(conns.iter().all(|c| c.start == 0 && c.end == 0 && c.length() == 1.0));
}

#[test]
fn st2_matches_lattice_oracle() {
    let state = FlowState::new(st2());
    for l in [1, 2, 3, 5, 10] {
        let conns = saddle_connections(&state, int(l)).unwrap();
        assert_eq!(integer_holonomies(&conns), three_square_l_holonomies(l * l), "L = {}", l);
    }
}

#[test]
fn pillowcase_matches_lattice_oracle() {
    // every pole is a half-period of the lattice 2Z^2; each primitive
    // vector up to sign is the holonomy of two connections
    let state = FlowState::new(pillowcase());
    for l in [1, 3, 10] {
        let conns = saddle_connections(&state, int(l)).unwrap();
        let expected: BTreeMap<(i64, i64), usize> = primitive_vectors_up_to_sign(l * l).into_iter().map(|v| (v, 2)).collect();
        assert_eq!(integer_holonomies(&conns), expected, "L = {}", l);
        for c in &conns {
            assert_ne!(c.start, c.end);
        }
    }
}

#[test]
fn golden_l_exact_and_float_agree() {
    let exact = saddle_connections(&FlowState::new(golden_l()), Golden::from_i64(4)).unwrap();
    let float = saddle_connections(&FlowState::new(golden_l().to_f64(1e-9).unwrap()), 4.0).unwrap();
    assert_eq!(exact.len(), float.len());
    for (a, b) in exact.iter().zip(&float) {
        let h = a.base_holonomy.to_f64();
        assert!((h.length() - b.length()).abs() < 1e-9);
    }
    // the rotated copy is a similarity image: same number of connections
    // within the rescaled radius
    let scale = 1.0 / 5f64.sqrt().sqrt();
    let rotated = saddle_connections(&FlowState::new(golden_l_rotated()), 4.0 * scale).unwrap();
    assert_eq!(rotated.len(), exact.len());
}

#[test]
fn nothing_below_the_shortest_connection() {
    assert!(saddle_connections(&FlowState::new(st2()), rat(99, 100)).unwrap().is_empty());
    assert!(saddle_connections(&FlowState::new(pillowcase()), rat(1, 2)).unwrap().is_empty());
    let g = FlowState::new(golden_l());
    // shortest golden-L connection has length phi - 1
    let phi_minus_one = Golden::new(rat(-1, 2), rat(1, 2));
    assert!(saddle_connections(&g, phi_minus_one.clone() * Golden::from_rational(&rat(99, 100)))
        .unwrap()
        .is_empty());
    assert!(!saddle_connections(&g, phi_minus_one).unwrap().is_empty());
    assert_eq!(
        saddle_connections(&FlowState::new(st2()), int(0)).unwrap_err(),
        FlatError::NonPositive("length bound")
    );
}

#[test]
fn matrix_action() {
    let s = FlowState::new(st2());
    let same = s.apply_matrix(&Mat2::identity()).unwrap();
    assert_eq!(same, s);

    let h = Mat2::horocycle(int(3));
    assert_eq!(h.apply(&Vec2::new(int(0), int(1))), Vec2::new(int(0), int(1)));
    assert_eq!(h.apply(&Vec2::new(int(1), int(0))), Vec2::new(int(1), int(3)));

    let f = f64_state(&st2());
    let back = f
        .apply_matrix(&Mat2::geodesic(1.7))
        .unwrap()
        .apply_matrix(&Mat2::geodesic(-1.7))
        .unwrap();
    for c in saddle_connections(&back, 3.0).unwrap() {
        assert!((c.holonomy.x - c.base_holonomy.x).abs() < 1e-9);
        assert!((c.holonomy.y - c.base_holonomy.y).abs() < 1e-9);
    }

    assert!(matches!(
        s.apply_matrix(&Mat2::new(int(2), int(0), int(0), int(1))),
        Err(FlatError::NotUnimodular(d)) if d == 2.0
    ));
}

#[test]
fn holonomy_covariance_exact() {
    let s = FlowState::new(st2());
    let m = Mat2::new(int(2), int(1), int(1), int(1));
    let moved = s.apply_matrix(&m).unwrap();
    let base = saddle_connections(&s, int(6)).unwrap();
    // m stretches by at most its operator norm (< 3)
    let flowed = saddle_connections(&moved, int(20)).unwrap();
    for c in &base {
        let image = m.apply(&c.holonomy);
        assert!(flowed.iter().any(|d| d.holonomy == image || d.holonomy == -image.clone()));
    }
    assert_eq!(moved.area(), s.area());
}

#[test]
fn k_epsilon_on_st2() {
    let s = f64_state(&st2());
    let empty = in_k_epsilon(&s, 0.5).unwrap();
    assert!(empty.acyclic && empty.connections.is_empty() && empty.circuit.is_none());

    // contracting the vertical direction makes the horizontal cylinder
    // boundaries short; with one cone point every short connection closes up
    let flowed = s.apply_matrix(&Mat2::geodesic(-3.0)).unwrap();
    let k = in_k_epsilon(&flowed, 0.1).unwrap();
    assert!(!k.acyclic);
    let c = k.circuit.expect("circuit certificate");
    assert!(c.verify(&k.connections, 0.1));
    assert!(c.length <= 0.1 * c.connections.len() as f64);
    assert!(k.connections.iter().all(|c| c.length() <= 0.1));
    assert_eq!(k.connections.len(), 3);
}

#[test]
fn pillowcase_tree_versus_forest() {
    let p = f64_state(&pillowcase());
    let k = in_k_epsilon(&p, 1.0).unwrap();
    assert!(!k.acyclic && k.connected);
    assert!(k.circuit.unwrap().verify(&k.connections, 1.0));

    // stretching horizontally leaves only the two vertical unit connections short
    let flowed = p.apply_matrix(&Mat2::geodesic(0.5)).unwrap();
    let k = in_k_epsilon(&flowed, 1.0).unwrap();
    assert!(k.acyclic && !k.connected);
    assert_eq!(k.connections.len(), 2);
}

fn fixture_states() -> Vec<FlowState<f64>> {
    let mut out = Vec::new();
    for base in [f64_state(&st2()), f64_state(&pillowcase()), FlowState::new(golden_l_rotated())] {
        for m in [Mat2::identity(), Mat2::geodesic(-1.0), Mat2::geodesic(0.8), Mat2::horocycle(0.7)] {
            out.push(base.apply_matrix(&m).unwrap());
        }
    }
    out
}

#[test]
fn k_epsilon_implies_systole_bound() {
    let grid: Vec<f64> = (1..=40).map(|i| i as f64 * 0.05).collect();
    for state in fixture_states() {
        let conns = saddle_connections(&state, 6.0).unwrap();
        let edges: Vec<(usize, usize, f64)> = conns.iter().map(|c| (c.start, c.end, c.length())).collect();
        let systole = min_cycle_weight(state.base.cone_points().len(), &edges).expect("some circuit within the window");
        for &eps in &grid {
            let k = in_k_epsilon(&state, eps).unwrap();
            if k.acyclic {
                assert!(eps <= systole + 1e-12, "eps {} systole {}", eps, systole);
            } else {
                assert!(k.circuit.unwrap().verify(&k.connections, eps));
            }
        }
        let bound = systole_lower_bound(&state, &grid).unwrap();
        if let Some(b) = bound {
            assert!(b <= systole);
        }
    }
}

#[test]
fn k_epsilon_is_monotone() {
    for state in fixture_states() {
        let mut seen_false = false;
        for i in 1..=30 {
            let k = in_k_epsilon(&state, i as f64 * 0.1).unwrap();
            if seen_false {
                assert!(!k.acyclic);
            }
            seen_false |= !k.acyclic;
        }
    }
}

#[test]
fn systole_bounds() {
    let grid: Vec<Rational> = (1..=20).map(|i| rat(i, 10)).collect();
    // every connection on ST2 is a loop, and the shortest has length one
    assert_eq!(systole_lower_bound(&FlowState::new(st2()), &grid).unwrap(), Some(rat(9, 10)));
    let fine: Vec<Rational> = (1..=200).map(|i| rat(i, 100)).collect();
    assert_eq!(systole_lower_bound(&FlowState::new(st2()), &fine).unwrap(), Some(rat(99, 100)));

    let s = f64_state(&st2());
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.01).collect();
    let mut last = f64::INFINITY;
    for t in [0.0, 1.0, 2.0, 3.0, 4.0] {
        let b = systole_lower_bound(&s.apply_matrix(&Mat2::geodesic(-t)).unwrap(), &grid)
            .unwrap()
            .unwrap_or(0.0);
        assert!(b <= last);
        assert!(b <= (-t).exp());
        last = b;
    }
    assert!(last < 0.02);
}

#[test]
fn kruskal_threshold_is_first_closing_length() {
    let p = f64_state(&pillowcase());
    let conns = saddle_connections(&p, 3.0).unwrap();
    let (t, c) = kruskal_threshold(4, &conns).unwrap();
    assert_eq!(t, 1.0);
    assert!(c.verify(&conns, t));
}

#[test]
fn alpha_on_st2() {
    let s = FlowState::new(st2());
    let cap = int(3);
    let lengths: Vec<f64> = (1..=9)
        .map(|k| alpha_length(disjoint_system_alpha(&s, k, cap.clone()).unwrap()))
        .collect();
    assert!(lengths[..6].iter().all(|&l| l == 1.0));
    assert!(lengths[6..].iter().all(|l| (l - 2f64.sqrt()).abs() < 1e-12));
    assert_eq!(
        disjoint_system_alpha(&s, 10, cap.clone()).unwrap_err(),
        FlatError::KTooLarge { k: 10, cap: 9 }
    );
    assert_eq!(disjoint_system_alpha(&s, 0, cap).unwrap_err(), FlatError::NonPositive("k"));
    // within length one only six connections exist
    assert_eq!(disjoint_system_alpha(&s, 7, int(1)).unwrap(), Alpha::Unbounded);
}

#[test]
fn alpha_two_matches_pairs() {
    for state in fixture_states() {
        let conns = saddle_connections(&state, 4.0).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..conns.len() {
            for j in i + 1..conns.len() {
                if disjoint(&state.base, &conns[i], &conns[j]) {
                    best = best.min(conns[i].length().max(conns[j].length()));
                }
            }
        }
        let a = alpha_length(disjoint_system_alpha(&state, 2, 4.0).unwrap());
        assert_eq!(a, best);
        assert_eq!(alpha_length(disjoint_system_alpha(&state, 1, 4.0).unwrap()), conns[0].length());
    }
}

#[test]
fn alpha_is_nondecreasing_and_families_respect_the_cap() {
    for state in fixture_states() {
        let cap = state.base.disjointness_cap();
        let mut last = 0.0;
        for k in 1..=cap.min(6) {
            let a = alpha_length(disjoint_system_alpha(&state, k, 2.5).unwrap());
            assert!(a >= last);
            last = a;
        }
        let conns = saddle_connections(&state, 2.0).unwrap();
        assert!(max_disjoint_family(&state.base, &conns) <= cap);
    }
}

#[test]
fn crossing_connections_are_not_disjoint() {
    let s = FlowState::new(st2());
    let conns = saddle_connections(&s, int(2)).unwrap();
    let diag: Vec<_> = conns.iter().filter(|c| c.base_holonomy == Vec2::new(int(1), int(1))).collect();
    let anti: Vec<_> = conns.iter().filter(|c| c.base_holonomy == Vec2::new(int(1), int(-1))).collect();
    assert_eq!((diag.len(), anti.len()), (3, 3));
    // each square carries one diagonal of each slope, and they cross
    let crossings = diag
        .iter()
        .flat_map(|a| anti.iter().map(move |b| (a, b)))
        .filter(|(a, b)| !disjoint(&s.base, a, b))
        .count();
    assert_eq!(crossings, 3);
    let unit: Vec<_> = conns.iter().filter(|c| c.length() == 1.0).collect();
    for a in &unit {
        for b in &diag {
            assert!(disjoint(&s.base, a, b));
        }
    }
}

#[test]
fn horocycle_runs() {
    let r = FlowState::new(golden_l_rotated());
    let one = horocycle_average(&r, 0.05, 0.1, 0.1).unwrap();
    assert_eq!(one.samples.len(), 1);
    let f = one.fraction(0.05);
    assert!(f == 0.0 || f == 1.0);

    let run = horocycle_average(&r, 0.05, 50.0, 0.1).unwrap();
    assert_eq!(run.samples.len(), 500);
    assert!((run.samples[499].t - 50.0).abs() < 1e-9);
    let fr = [0.05, 0.02, 0.01].map(|d| run.fraction(d));
    assert!(fr[0] <= fr[1] && fr[1] <= fr[2]);
    assert_eq!(run, horocycle_average(&r, 0.05, 50.0, 0.1).unwrap());

    for (d, t, dt) in [(0.0, 1.0, 0.1), (0.1, -1.0, 0.1), (0.1, 1.0, 0.0)] {
        assert!(matches!(horocycle_average(&r, d, t, dt), Err(FlatError::NonPositive(_))));
    }
}

#[test]
fn periodic_control_direction() {
    // the vertical direction of ST2 is periodic; the horocycle fixes
    // vertical holonomies, so contracted vertical loops stay short forever
    let s = f64_state(&st2()).apply_matrix(&Mat2::geodesic(3.0)).unwrap();
    let run = horocycle_average(&s, 0.1, 20.0, 0.5).unwrap();
    assert_eq!(run.fraction(0.1), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covariance_under_random_matrices(t in -1.5f64..1.5, u in -2.0f64..2.0, th in 0.0f64..std::f64::consts::TAU) {
        let s = f64_state(&st2());
        let m = Mat2::geodesic(t) * Mat2::horocycle(u) * Mat2::rotation(th);
        let moved = s.apply_matrix(&m).unwrap();
        prop_assert!((moved.area() - 3.0).abs() < 1e-9);
        let base = saddle_connections(&s, 2.0).unwrap();
        for c in saddle_connections(&moved, 2.0).unwrap() {
            let want = m.apply(&c.base_holonomy);
            prop_assert!((want.x - c.holonomy.x).abs() < 1e-9 && (want.y - c.holonomy.y).abs() < 1e-9);
        }
        // composition law
        let m2 = Mat2::horocycle(0.3);
        let twice = moved.apply_matrix(&m2).unwrap();
        let once = s.apply_matrix(&(m2 * m)).unwrap();
        for (a, b) in [(twice.applied.a, once.applied.a), (twice.applied.b, once.applied.b), (twice.applied.c, once.applied.c), (twice.applied.d, once.applied.d)] {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!(!base.is_empty());
    }

    #[test]
    fn shearing_st2_keeps_the_lattice(p in -3i64..=3, q in 1i64..=3) {
        // an integer shear maps the lattice to itself, so the sheared
        // surface has the same holonomy multiset within a disk
        let m = Mat2::new(int(1), int(p), int(0), int(1));
        let s = st2().transformed(&m).unwrap();
        let r = int(q + 1);
        let conns = saddle_connections(&FlowState::new(s), r.clone()).unwrap();
        let rr = (q + 1) * (q + 1);
        prop_assert_eq!(integer_holonomies(&conns), three_square_l_holonomies(rr));
    }
}
