use fano_core::brute::{collect_planes, enumerate_planes, plane_contained, split_quadric, PlaneRep};
use fano_core::construct::{pencil_from_system, pencil_system, AmbientForm, VeroneseFrame};
use fano_core::generators::random_form;
use fano_core::polyring::{
    is_c_generating, map_rank, monomial_basis, multiplication_map, rank, GradedForm, LinearSystem, Matrix,
};
use fano_core::smoothness::partials_pullback;
use fano_core::Field;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u64 = 1_000_003;

/// A random system; half the time every member shares a linear factor, so
/// both generating and non-generating systems show up.
fn random_system(seed: u64, r: usize, b: u32, m: usize, field: Field) -> LinearSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = r + 1;
    let shared = seed.is_multiple_of(2) && b >= 2;
    let members = (0..m)
        .map(|_| {
            if shared {
                let l = random_form(&mut rng, field, nvars, 1, 5);
                let rest = random_form(&mut rng, field, nvars, b - 1, 5);
                l.mul(&rest).unwrap()
            } else {
                random_form(&mut rng, field, nvars, b, 5)
            }
        })
        .collect();
    LinearSystem::new(field, nvars, b, members).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn generating_is_monotone_in_c(seed in any::<u64>(), r in 1usize..=2, b in 1u32..=3, m in 1usize..=4, c in 1u32..=3) {
        let sys = random_system(seed, r, b, m, Field::prime(101).unwrap());
        if is_c_generating(&sys, c) {
            prop_assert!(is_c_generating(&sys, c + 1));
        }
    }

    #[test]
    fn rank_agrees_over_q_and_large_primes(
        k in 1usize..=5,
        rows in 1usize..=5,
        cols in 1usize..=5,
        seed in any::<u64>(),
    ) {
        // entries in [-5, 5] with at most 5 columns keep every minor below 10^6
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left: Vec<Vec<i64>> = (0..rows).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let right: Vec<Vec<i64>> = (0..k).map(|_| (0..cols).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let prod: Vec<Vec<i64>> = (0..rows)
            .map(|i| (0..cols).map(|j| (0..k).map(|t| left[i][t] * right[t][j]).sum::<i64>().clamp(-5, 5)).collect())
            .collect();
        let over_q = Matrix::from_i64_rows(Field::Rational, &prod).rank().unwrap();
        for p in [1_000_003u64, 1_000_033, 1_000_037] {
            let over_p = Matrix::from_i64_rows(Field::prime(p).unwrap(), &prod).rank().unwrap();
            prop_assert_eq!(over_q, over_p);
        }
    }

    #[test]
    fn rank_at_c0_is_span_dimension(seed in any::<u64>(), k in 1usize..=5, extra in 0usize..=3) {
        use rand::seq::SliceRandom;
        let field = Field::prime(P).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis = monomial_basis(3, 2);
        basis.shuffle(&mut rng);
        let chosen = &basis[..k];
        let unit = |i: usize| GradedForm::monomial(field, chosen[i].exps().to_vec(), field.one());
        let mut members: Vec<GradedForm> = (0..k).map(unit).collect();
        for _ in 0..extra {
            let mut g = GradedForm::zero(field, 3, 2);
            for i in 0..k {
                g = g.add(&unit(i).scale(&field.random(&mut rng, 0))).unwrap();
            }
            members.push(g);
        }
        let sys = LinearSystem::new(field, 3, 2, members).unwrap();
        prop_assert_eq!(map_rank(&sys, 0), k);
        prop_assert_eq!(rank(&multiplication_map(&sys, 0)).unwrap(), k);
    }

    #[test]
    fn containment_ignores_the_row_basis(idx in 0usize..806, a in 1i64..5, b in 0i64..5, c in 0i64..5, d in 1i64..5) {
        // lines of P^3(F_5) against the split quadric
        let q = 5;
        let quad = split_quadric(1, q).unwrap();
        let planes = enumerate_planes(3, 1, q).unwrap();
        let plane = &planes[idx];
        prop_assume!((a * d - b * c).rem_euclid(5) != 0);
        let rows = plane.rows();
        let mixed: Vec<Vec<i64>> = vec![
            (0..4).map(|j| a * rows[0][j] as i64 + b * rows[1][j] as i64).collect(),
            (0..4).map(|j| c * rows[0][j] as i64 + d * rows[1][j] as i64).collect(),
        ];
        let again = PlaneRep::from_rows(q, mixed.clone()).unwrap();
        prop_assert_eq!(&again, plane);

        // substitute the raw, non-canonical parametrization directly
        let field = Field::prime(q).unwrap();
        let images: Vec<GradedForm> = (0..4)
            .map(|j| {
                let terms = (0..2).map(|i| {
                    let mut e = vec![0, 0];
                    e[i] = 1;
                    (e, field.from_i64(mixed[i][j]))
                });
                GradedForm::from_terms(field, 2, 1, terms).unwrap()
            })
            .collect();
        let raw = quad.substitute(&images).unwrap().is_zero();
        prop_assert_eq!(raw, plane_contained(&quad, plane).unwrap());
    }

    #[test]
    fn pencil_is_linear(seed in 0u64..20, a in -50i64..50, b in -50i64..50, a2 in -50i64..50, b2 in -50i64..50) {
        let field = Field::prime(101).unwrap();
        let sys = pencil_system(1, 3, 4, seed, field).unwrap();
        let g = |x: i64, y: i64| {
            let (x, y) = (field.from_i64(x), field.from_i64(y));
            if x.is_zero() && y.is_zero() {
                None
            } else {
                Some(pencil_from_system(4, &sys, &x, &y).unwrap().poly().clone())
            }
        };
        if let (Some(g1), Some(g2), Some(g12)) = (g(a, b), g(a2, b2), g(a + a2, b + b2)) {
            prop_assert_eq!(g1.add(&g2).unwrap(), g12);
        }
    }

    #[test]
    fn partials_pullback_is_additive(seed in any::<u64>(), e in 1u32..=2) {
        let field = Field::prime(P).unwrap();
        let frame = VeroneseFrame::new(1, e, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y_linear = |rng: &mut ChaCha8Rng| {
            let mut g = GradedForm::zero(field, frame.nvars(), 3);
            for j in 0..frame.m() {
                let h = random_form(rng, field, frame.x_count(), 2, 5);
                let h = frame.embed_x(&h).unwrap();
                g = g.add(&GradedForm::var(field, frame.nvars(), frame.y_pos(j)).mul(&h).unwrap()).unwrap();
            }
            AmbientForm::new(frame.clone(), g).unwrap()
        };
        let g1 = y_linear(&mut rng);
        let g2 = y_linear(&mut rng);
        let sum = AmbientForm::new(frame.clone(), g1.poly().add(g2.poly()).unwrap()).unwrap();
        let lhs = partials_pullback(&sum).unwrap();
        let rhs = partials_pullback(&g1).unwrap().add(&partials_pullback(&g2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn quadric_planes_are_closed_under_canonicalization() {
    let quad = split_quadric(1, 7).unwrap();
    let lines = collect_planes(3, 1, 7, |p| plane_contained(&quad, p).unwrap()).unwrap();
    assert_eq!(lines.len(), 16);
    for l in &lines {
        let rows: Vec<Vec<i64>> = l
            .rows()
            .iter()
            .rev()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect();
        assert_eq!(&PlaneRep::from_rows(7, rows).unwrap(), l);
    }
}
