use grasspack::binocular::{icosahedron_packing, octahedron_packing};
use grasspack::bounds::*;
use grasspack::clifford::seventy_packing_eq55;
use grasspack::packing::{Metric, Packing};
use grasspack::subspace::Subspace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn largest_arrangements_table() {
    let rows = [
        (2, 3, 4),
        (3, 6, 10),
        (4, 10, 18),
        (5, 15, 28),
        (6, 21, 40),
        (7, 28, 54),
        (8, 36, 70),
    ];
    for (m, simplex, orthoplex) in rows {
        assert_eq!(max_simplex_n(m), simplex, "m = {m}");
        assert_eq!(max_orthoplex_n(m), orthoplex, "m = {m}");
        assert_eq!(BoundKind::governing(m, simplex), BoundKind::Simplex);
        assert_eq!(BoundKind::governing(m, simplex + 1), BoundKind::Orthoplex);
    }
}

#[test]
fn bound_values() {
    // n(m-n)/m * N/(N-1) and n(m-n)/m
    assert!((simplex_bound(4, 2, 6).unwrap() - 1.2).abs() < 1e-15);
    assert!((simplex_bound(4, 2, 10).unwrap() - 10.0 / 9.0).abs() < 1e-15);
    assert_eq!(orthoplex_bound(4, 2).unwrap(), 1.0);
    assert_eq!(orthoplex_bound(8, 4).unwrap(), 2.0);
    assert!((orthoplex_bound(3, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn constructions_attain_their_bounds() {
    let cases = [
        (octahedron_packing(), BoundKind::Orthoplex),
        (seventy_packing_eq55().unwrap(), BoundKind::Orthoplex),
        (icosahedron_packing(), BoundKind::Simplex),
    ];
    for (pk, kind) in cases {
        let report = certify(&pk, EXACT_TOL).unwrap();
        assert_eq!(report.applicable, kind);
        assert!(report.attained.is_attained(), "{report:?}");
        assert!((report.min_d2 - report.governing_bound()).abs() <= EXACT_TOL);
    }
}

#[test]
fn part_of_a_simplex_falls_short() {
    // still equidistant, but five planes face the larger bound 1.25
    let ico = icosahedron_packing();
    let mut subs = ico.subspaces().to_vec();
    subs.truncate(5);
    let pk = Packing::new(subs, Metric::Chordal).unwrap();
    let report = certify(&pk, EXACT_TOL).unwrap();
    assert_eq!(report.applicable, BoundKind::Simplex);
    assert_eq!(report.attained, Attainment::No);
    assert!(report.spread < 1e-12);
}

#[test]
fn random_packings_are_not_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for count in [3, 8, 20] {
        let subs = (0..count)
            .map(|_| Subspace::random(4, 2, &mut rng).unwrap())
            .collect();
        let pk = Packing::new(subs, Metric::Chordal).unwrap();
        let report = certify(&pk, DEFAULT_TOL).unwrap();
        assert_eq!(report.attained, Attainment::No);
        assert!(report.min_d2 < report.governing_bound());
    }
}
