use cotangent::cone::{
    cosection_check, curvilinear_sweep_with, normal_cone, obstruction_complex, Cosection, SweepConfig,
};
use cotangent::dg::{cotangent_fiber, minimize_at_origin, resolve_through};
use cotangent::groebner::{groebner_basis, ideal_syzygies, radical_membership, MonomialOrder};
use cotangent::job::{parse_job, print_job, Task};
use cotangent::poly::{Monomial, PointedModel, Polynomial, Rational};
use cotangent::report::{run_job, RunOptions};
use cotangent::tangent::{classify, tangent_dims, zariski_tangent, SingularityKind, TangentLie};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn names(k: usize) -> Vec<String> {
    ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
}

fn term(nvars: usize, min_deg: u32, max_deg: u32) -> impl Strategy<Value = (Vec<u32>, i64)> {
    (prop::collection::vec(0..nvars, min_deg as usize..=max_deg as usize), prop::sample::select(vec![-2i64, -1, 1, 2]))
        .prop_map(move |(slots, c)| {
            let mut e = vec![0u32; nvars];
            for s in slots {
                e[s] += 1;
            }
            (e, c)
        })
}

/// Nonzero polynomial with every term of degree in `min_deg..=max_deg`.
fn poly(nvars: usize, min_deg: u32, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(term(nvars, min_deg, max_deg), 1..=3)
        .prop_map(move |ts| Polynomial::from_terms(nvars, ts.into_iter().map(|(e, c)| (Monomial::new(e), q(c)))))
        .prop_filter("nonzero", |f| !f.is_zero())
}

/// Pointed model at the origin: 1 to 3 variables, 1 to 3 generators of degree at most 3.
fn model() -> impl Strategy<Value = PointedModel> {
    (1usize..=3).prop_flat_map(|m| {
        prop::collection::vec(poly(m, 1, 3), 1..=3)
            .prop_map(move |gens| PointedModel::new(names(m), gens, vec![Rational::zero(); m]).unwrap())
    })
}

fn model_with_multiplier() -> impl Strategy<Value = (PointedModel, Polynomial)> {
    model()
        .prop_flat_map(|m| {
            let k = m.nvars();
            (Just(m), prop::collection::vec(term(k, 0, 2), 1..=2))
        })
        .prop_map(|(m, ts)| {
            let k = m.nvars();
            let g = Polynomial::from_terms(k, ts.into_iter().map(|(e, c)| (Monomial::new(e), q(c))));
            (m, g)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn groebner_certificate_and_normal_form((m, f) in model().prop_flat_map(|m| { let k = m.nvars(); (Just(m), poly(k, 0, 3)) })) {
        let k = m.nvars();
        for order in [MonomialOrder::GRevLex, MonomialOrder::Lex] {
            let gb = groebner_basis(&m.generators, k, order);
            prop_assert!(gb.verify());
            let nf = gb.normal_form(&f);
            prop_assert_eq!(gb.normal_form(&nf), nf.clone());
            prop_assert!(gb.contains(&(&f - &nf)));
        }
        let again = groebner_basis(&m.generators, k, MonomialOrder::GRevLex);
        prop_assert_eq!(again.generators, groebner_basis(&m.generators, k, MonomialOrder::GRevLex).generators);
    }

    #[test]
    fn membership_implies_radical_membership((m, g) in model_with_multiplier()) {
        let f = &g * &m.generators[0];
        prop_assert!(radical_membership(&f, &m.generators, m.nvars()));
        let square = &m.generators[0] * &m.generators[0];
        let gb = groebner_basis(std::slice::from_ref(&square), m.nvars(), MonomialOrder::GRevLex);
        prop_assert!(gb.contains(&square));
        prop_assert!(radical_membership(&m.generators[0], &[square], m.nvars()));
    }

    #[test]
    fn syzygies_are_certified(m in model()) {
        for s in ideal_syzygies(&m.generators, m.nvars()) {
            prop_assert!(s.dot(&m.generators).is_zero());
        }
    }

    #[test]
    fn resolution_is_certified(m in model()) {
        let res = resolve_through(&m, 3).unwrap();
        prop_assert!(res.check_d_squared());
        for j in 1..=res.verified_through {
            prop_assert!(res.certify_acyclic(j));
        }
        let fiber = cotangent_fiber(&res, 3).unwrap();
        prop_assert!(fiber.composes_to_zero());
        let mm = minimize_at_origin(&res).unwrap();
        prop_assert!(mm.is_minimal());
        prop_assert_eq!(mm.counts(), fiber.homology_dims());
    }

    #[test]
    fn redundant_generator_changes_nothing((m, g) in model_with_multiplier()) {
        let bigger = m.with_generator(&g * &m.generators[0]);
        prop_assert_eq!(tangent_dims(&m, 3).unwrap().dims, tangent_dims(&bigger, 3).unwrap().dims);
        prop_assert_eq!(classify(&m, 3).unwrap().kind, classify(&bigger, 3).unwrap().kind);
    }

    #[test]
    fn tangent_dichotomies(m in model()) {
        let table = tangent_dims(&m, 4).unwrap();
        let d = &table.dims;
        prop_assert_eq!(d[0], zariski_tangent(&m));
        if d[1] == 0 {
            prop_assert!(d[1..].iter().all(|&x| x == 0));
        }
        if d[2..].contains(&0) {
            prop_assert!(d[2..].iter().all(|&x| x == 0));
        }
        let class = classify(&m, 4).unwrap();
        match class.kind {
            SingularityKind::Smooth => prop_assert!(d[1..].iter().all(|&x| x == 0)),
            SingularityKind::Lci => prop_assert!(d[1] != 0 && d[2..].iter().all(|&x| x == 0)),
            SingularityKind::General => prop_assert!(d[2..].iter().all(|&x| x != 0)),
        }
    }

    #[test]
    fn bracket_axioms(m in model()) {
        let lie = TangentLie::new(&m, 3).unwrap();
        prop_assert!(lie.check_antisymmetry().unwrap());
        prop_assert!(lie.check_jacobi().unwrap());
    }

    #[test]
    fn obstruction_complex_and_cone(m in model()) {
        let complex = obstruction_complex(&m).unwrap();
        prop_assert!(complex.delta.rows() == 0 || complex.delta.mul(&complex.ds).is_zero());
        prop_assert_eq!(complex.t2_dim(), tangent_dims(&m, 2).unwrap().dims[1]);
        let cone = normal_cone(&m).unwrap();
        let cone_gb = groebner_basis(&cone.cone_ideal, cone.names.len(), MonomialOrder::GRevLex);
        for f in &m.generators {
            prop_assert!(cone_gb.contains(&f.embed(cone.names.len(), &(0..m.nvars()).collect::<Vec<_>>())));
        }
        for g in &cone.fiber_ideal {
            prop_assert_eq!(g.lowest_degree(), g.total_degree());
        }
        let config = SweepConfig { max_order: 3, grid: 1, seed: Some(5), random_samples: 2 };
        let sweep = curvilinear_sweep_with(&m, &config, &cone, &complex).unwrap();
        for c in &sweep.classes {
            prop_assert!(complex.in_kernel(&c.raw));
            prop_assert!(cone.fiber_contains_point(&c.raw).unwrap());
        }
        if complex.t2_dim() == 0 {
            prop_assert!(sweep.classes.iter().all(|c| c.class.iter().all(Zero::is_zero)));
        }
    }

    #[test]
    fn cosection_lemma_on_factored_models(
        g in poly(2, 1, 2),
        h1 in poly(2, 0, 2),
        h2 in poly(2, 0, 2),
        c1 in -2i64..3,
        c2 in -2i64..3,
    ) {
        let h1 = &h1 + &Polynomial::constant(2, q(c1));
        let h2 = &h2 + &Polynomial::constant(2, q(c2));
        prop_assume!(!(&g * &h1).is_zero() && !(&g * &h2).is_zero());
        let m = PointedModel::new(names(2), vec![&g * &h1, &g * &h2], vec![q(0), q(0)]).unwrap();
        let sigma = Cosection::new(vec![h2.clone(), -&h1]);
        let r = cosection_check(&m, &sigma, &SweepConfig::default()).unwrap();
        prop_assert!(r.all_pass(), "{:?}", r);
    }

    #[test]
    fn job_round_trip_and_determinism(m in model(), max_index in 1u32..5, seed in prop::option::of(0u64..100)) {
        let vars = &m.variables;
        let ideal: Vec<String> = m.generators.iter().map(|g| format!("{:?}", g.to_string_with(vars))).collect();
        let seed_line = seed.map(|s| format!("[sweep]\nseed = {s}\n")).unwrap_or_default();
        let text = format!(
            "variables = {:?}\nideal = [{}]\npoint = [{}]\nmax_index = {max_index}\ntasks = [\"tangent\", \"cone\", \"obstruct\"]\n{seed_line}",
            vars,
            ideal.join(", "),
            vec!["\"0\""; m.nvars()].join(", "),
        );
        let spec = parse_job(&text).unwrap();
        prop_assert_eq!(&spec.model, &m);
        prop_assert_eq!(spec.expanded_tasks(), vec![Task::Tangent, Task::Cone, Task::Obstruct]);
        let printed = print_job(&spec);
        prop_assert_eq!(&parse_job(&printed).unwrap(), &spec);
        let a = run_job(&spec, &RunOptions::default());
        let b = run_job(&parse_job(&printed).unwrap(), &RunOptions::default());
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert!(a.failed_checks().is_empty(), "{:?}", a.failed_checks());
    }
}
