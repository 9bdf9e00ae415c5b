use std::collections::HashSet;
use std::f64::consts::PI;

use grasspack::angles::principal_angles;
use grasspack::bounds::{certify, Attainment, BoundKind, EXACT_TOL};
use grasspack::clifford::*;
use grasspack::packing::{min_distance, Metric};
use num_bigint::BigUint;
use num_rational::Ratio;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

#[test]
fn product_rule_exhaustive_i2() {
    let all = ExtraspecialElement::all(2);
    assert_eq!(all.len(), 32);
    for g in &all {
        for h in &all {
            let product = &g.to_matrix() * &h.to_matrix();
            // (-1)^s X(a)Y(b) (-1)^s' X(a')Y(b') = (-1)^(a'.b+s+s') X(a+a')Y(b+b')
            let sign = (h.a.dot(g.b) + g.sign + h.sign) % 2 == 1;
            let expect = ExtraspecialElement::new(g.a.add(h.a), g.b.add(h.b), sign);
            assert_eq!(product, expect.to_matrix());
            assert_eq!(g.compose(h), expect);
        }
    }
}

#[test]
fn quadratic_form_detects_squares() {
    for i in 1..=3 {
        let id = ExactMatrix::identity(1 << i);
        for g in ExtraspecialElement::all(i) {
            let m = g.to_matrix();
            let square = &m * &m;
            assert_eq!(square == id, g.q() == 0);
            assert!(square == id || square == id.neg());
        }
    }
}

#[test]
fn bilinear_form_is_polarization_of_q() {
    let elems: Vec<(F2Vec, F2Vec)> = F2Vec::all(2)
        .flat_map(|a| F2Vec::all(2).map(move |b| (a, b)))
        .collect();
    assert_eq!(elems.len(), 16);
    for &g1 in &elems {
        assert_eq!(quad_form(g1.0, F2Vec::zero(2)), 0);
        assert_eq!(bilin_form(g1, g1), 0);
        for &g2 in &elems {
            let sum = (g1.0.add(g2.0), g1.1.add(g2.1));
            let polar =
                (quad_form(sum.0, sum.1) + quad_form(g1.0, g1.1) + quad_form(g2.0, g2.1)) % 2;
            assert_eq!(bilin_form(g1, g2), polar);
        }
    }
}

#[test]
fn generators_are_orthogonal_and_normalize_e() {
    for i in 1..=3 {
        let gens = group_generators(i).unwrap();
        let elems = ExtraspecialElement::all(i);
        for g in &gens {
            assert!(g.is_orthogonal());
            let gt = g.transpose();
            for e in &elems {
                let conj = &(g * &e.to_matrix()) * &gt;
                assert!(
                    ExtraspecialElement::from_matrix(i, &conj).is_some(),
                    "generator leaves E at i = {i}"
                );
            }
        }
    }
}

#[test]
fn hadamard_exchanges_x_and_y() {
    for i in 1..=3 {
        let h = hadamard(i);
        assert_eq!(&h * &h, ExactMatrix::identity(1 << i));
        for a in F2Vec::all(i) {
            let conj = &(&h * &x_gate(i, a)) * &h;
            let y = y_gate(i, a);
            assert!(conj == y || conj == y.neg());
        }
    }
}

#[test]
fn hadamard_maps_coordinate_frame_to_dual_frame() {
    for i in 1..=3u32 {
        let m = 1usize << i;
        let h = hadamard(i);
        for v in 0..m {
            let e_v = ExactMatrix::new(m, 1, (0..m).map(|u| i64::from(u == v)).collect(), 0);
            let sign = |u: usize| if (u & v).count_ones() % 2 == 0 { 1 } else { -1 };
            let dual = ExactMatrix::new(m, 1, (0..m).map(sign).collect(), i);
            assert_eq!(&h * &e_v, dual);
        }
    }
}

#[test]
fn counting_formulas() {
    assert_eq!(clifford_order(1).unwrap(), big(16));
    assert_eq!(clifford_order(2).unwrap(), big(2304));
    assert_eq!(clifford_order(3).unwrap(), big(5_160_960));
    assert_eq!(theorem3_count(2, 1).unwrap(), big(18));
    assert_eq!(theorem3_count(3, 2).unwrap(), big(70));
    assert_eq!(theorem3_count(3, 0).unwrap(), big(240));
    assert_eq!(theorem3_count(2, 0).unwrap(), big(24));
    for i in 2..=6u32 {
        let f = 2 * ((1u64 << i) - 1) * ((1u64 << (i - 1)) + 1);
        assert_eq!(theorem3_count(i, i - 1).unwrap(), big(f), "i = {i}");
    }
    // lines: (2+2)(2^2+2)...(2^i+2)
    for i in 1..=6u32 {
        let lines: u64 = (1..=i).map(|j| (1u64 << j) + 2).product();
        assert_eq!(theorem3_count(i, 0).unwrap(), big(lines));
    }
}

#[test]
fn singular_subspaces_match_counts() {
    assert_eq!(singular_subspace_count(3, 1).unwrap(), 35);
    assert_eq!(singular_subspace_count(2, 1).unwrap(), 9);
    assert_eq!(singular_subspace_count(3, 3).unwrap(), 30);
    for i in 1..=3u32 {
        for d in 1..=i {
            let expect = theorem3_count(i, i - d).unwrap() >> d;
            assert_eq!(
                big(singular_subspace_count(i, d).unwrap()),
                expect,
                "i = {i}, d = {d}"
            );
        }
    }
}

#[test]
fn clifford_orbits_have_predicted_size_and_distance() {
    for (i, k) in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
        let orbit = clifford_orbit(i, k).unwrap();
        assert_eq!(
            big(orbit.len() as u64),
            theorem3_count(i, k).unwrap(),
            "(i, k) = ({i}, {k})"
        );
        let expect = if k == 0 {
            Ratio::new(1, 2)
        } else {
            Ratio::from_integer(1i64 << (k - 1))
        };
        assert_eq!(
            orbit.min_chordal_squared().unwrap(),
            expect,
            "(i, k) = ({i}, {k})"
        );
        let s = &orbit.subspaces[0];
        assert_eq!((s.m(), s.n()), (1 << i, 1 << k));
    }
}

#[test]
fn clifford_lines_meet_at_forty_five_degrees() {
    let pk = theorem3_packing(2, 0).unwrap();
    assert_eq!(pk.len(), 24);
    let theta = min_distance(&pk, Metric::MaxAngle).unwrap().value;
    assert!((theta - PI / 4.0).abs() < 1e-12);
}

#[test]
fn orthoplex_packings_certify() {
    for (i, k, count) in [(2, 1, 18), (3, 2, 70)] {
        let pk = theorem3_packing(i, k).unwrap();
        assert_eq!(pk.len(), count);
        let report = certify(&pk, EXACT_TOL).unwrap();
        assert_eq!(report.applicable, BoundKind::Orthoplex);
        assert_ne!(report.attained, Attainment::No, "{report:?}");
    }
}

#[test]
fn generators_permute_the_orbit() {
    for (i, k) in [(2, 1), (3, 2)] {
        let orbit = clifford_orbit(i, k).unwrap();
        let keys: HashSet<_> = orbit.subspaces.iter().map(|s| s.key()).collect();
        for g in group_generators(i).unwrap() {
            let images: HashSet<_> = orbit
                .subspaces
                .iter()
                .map(|s| s.transformed(&g).unwrap().key())
                .collect();
            assert_eq!(images, keys);
        }
    }
}

#[test]
fn orbit_cap_is_enforced() {
    let seed = ExactSubspace::coordinate_span(4, &[0, 1]).unwrap();
    let err = orbit(&[seed], &group_generators(2).unwrap(), 5).unwrap_err();
    assert_eq!(err, grasspack::error::Error::OrbitOverflow { cap: 5 });
    assert!(matches!(
        clifford_orbit(4, 1),
        Err(grasspack::error::Error::TooLarge(4))
    ));
}

fn power_sums(cos2: [Ratio<i64>; 4]) -> Vec<Ratio<i64>> {
    (1..=4)
        .map(|j| cos2.iter().map(|c| c.pow(j)).sum())
        .collect()
}

#[test]
fn seventy_packing() {
    let exact = seventy_orbit().unwrap();
    assert_eq!(exact.len(), 70);

    let (zero, half, one) = (
        Ratio::from_integer(0),
        Ratio::new(1, 2),
        Ratio::from_integer(1),
    );
    let allowed = [
        power_sums([one, one, zero, zero]),
        power_sums([half, half, half, half]),
        power_sums([zero, zero, zero, zero]),
    ];
    let s = &exact.subspaces;
    for a in 0..s.len() {
        for b in a + 1..s.len() {
            let sums = s[a].cos2_power_sums(&s[b]);
            assert!(
                allowed.contains(&sums),
                "pair ({a}, {b}) has cos^2 power sums {sums:?}"
            );
        }
    }

    let clifford = clifford_orbit(3, 2).unwrap();
    assert_eq!(exact.distance_spectrum(), clifford.distance_spectrum());

    let pk = seventy_packing_eq55().unwrap();
    let patterns = [[0.0, 0.0, PI / 2.0, PI / 2.0], [PI / 4.0; 4], [PI / 2.0; 4]];
    for (i, j, _) in pk.pairwise(Metric::Chordal) {
        let angles = principal_angles(&pk.subspaces()[i], &pk.subspaces()[j]).unwrap();
        let ok = patterns.iter().any(|p| {
            p.iter()
                .zip(angles.angles())
                .all(|(x, y)| (x - y).abs() <= 1e-9)
        });
        assert!(ok, "angles {:?}", angles.angles());
    }
    let dc = min_distance(&pk, Metric::Chordal).unwrap().value;
    let dg = min_distance(&pk, Metric::Geodesic).unwrap().value;
    assert!((dc * dc - 2.0).abs() < 1e-12);
    assert!((dg * dg - PI * PI / 4.0).abs() < 1e-12);
}

#[test]
fn seventy_seeds_alone_give_partial_orbits() {
    let gens = seventy_generators();
    let seeds = seventy_seeds();
    let first = orbit(&seeds[..1], &gens, SEVENTY_CAP).unwrap();
    let second = orbit(&seeds[1..], &gens, SEVENTY_CAP).unwrap();
    assert_eq!((first.len(), second.len()), (14, 56));
}

#[test]
fn generators_give_full_group_order() {
    for i in 1..=2u32 {
        let gens = group_generators(i).unwrap();
        let id = ExactMatrix::identity(1 << i);
        let mut seen: HashSet<ExactMatrix> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(g) = frontier.pop() {
            for s in &gens {
                let h = &g * s;
                if seen.insert(h.clone()) {
                    frontier.push(h);
                }
            }
        }
        assert_eq!(
            big(seen.len() as u64),
            clifford_order(i).unwrap(),
            "i = {i}"
        );
    }
}

#[test]
fn hadamard_factors_into_one_bit_hadamards() {
    for i in 1..=3u32 {
        let product = (0..i).fold(ExactMatrix::identity(1 << i), |acc, j| {
            &acc * &partial_hadamard(i, j)
        });
        assert_eq!(product, hadamard(i));
    }
}
