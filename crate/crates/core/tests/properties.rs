use num_traits::{One, Zero};
use proptest::prelude::*;

use pglcount::bott::{
    bott_degree, bott_degree_on, closed_form_count, closed_form_for_case, fixed_components,
    grid_params, porteous_class,
};
use pglcount::instance::{generate_instance, random_subspace};
use pglcount::linalg::{mat_mul, rank_exact, vec_mat};
use pglcount::numeric::{solve_numeric, PathStatus, SolverConfig};
use pglcount::pairing::{dual_params, orthogonal, pair};
use pglcount::scalar::rat;
use pglcount::structured::{enumerate_solutions, make_structured_instance, verify_solutions};
use pglcount::wronskian::{wronskian_form, wronskian_of};
use pglcount::{
    act, act_subspace, sum_dim, sym_power_matrix, BinaryForm, CaseTag, ProjTransform, Rational,
    Subspace,
};

fn form(d: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(-6i64..=6, d + 1).prop_map(|c| BinaryForm::from_ints(&c))
}

fn transform() -> impl Strategy<Value = ProjTransform> {
    prop::array::uniform4(-5i64..=5).prop_filter_map("singular", |e| {
        ProjTransform::from_ints(e)
            .ok()
            .filter(|t| !t.is_singular())
    })
}

fn subspace(d: usize) -> impl Strategy<Value = Subspace> {
    (1..=d + 1, any::<u64>()).prop_map(move |(k, seed)| {
        use rand::SeedableRng;
        random_subspace(d, k, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    })
}

fn degree_and_form() -> impl Strategy<Value = (usize, BinaryForm)> {
    (1usize..=5).prop_flat_map(|d| (Just(d), form(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sym_power_is_multiplicative(d in 0usize..=5, t1 in transform(), t2 in transform()) {
        let lhs = sym_power_matrix(&t1.matrix().mul(t2.matrix()), d);
        let rhs = mat_mul(&sym_power_matrix(t1.matrix(), d), &sym_power_matrix(t2.matrix(), d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn act_is_the_row_times_sym_power((d, f) in degree_and_form(), t in transform()) {
        let via_matrix = vec_mat(&f.coeffs, &sym_power_matrix(t.matrix(), d));
        prop_assert_eq!(act(&f, &t).coeffs, via_matrix);
    }

    #[test]
    fn act_composes_on_the_right((_, f) in degree_and_form(), t1 in transform(), t2 in transform()) {
        let stepwise = act(&act(&f, &t1), &t2);
        prop_assert_eq!(stepwise.canonical(), act(&f, &t1.compose(&t2)).canonical());
    }

    #[test]
    fn act_subspace_group_law(v in subspace(4), t1 in transform(), t2 in transform()) {
        let stepwise = act_subspace(&act_subspace(&v, &t1).unwrap(), &t2).unwrap();
        prop_assert_eq!(stepwise, act_subspace(&v, &t1.compose(&t2)).unwrap());
        prop_assert_eq!(act_subspace(&v, &t1).unwrap().dim(), v.dim());
    }

    #[test]
    fn canonical_is_idempotent((_, f) in degree_and_form()) {
        let c = f.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        if !f.is_zero() {
            let first = c.coeffs.iter().find(|x| !x.is_zero()).unwrap();
            prop_assert!(first.is_one());
        }
    }

    #[test]
    fn sum_dim_matches_rank_of_stacked_bases(v in subspace(5), w in subspace(5)) {
        let stacked: Vec<Vec<Rational>> = v.basis().iter().chain(w.basis()).cloned().collect();
        let s = sum_dim(&v, &w).unwrap();
        prop_assert_eq!(s, rank_exact(&stacked));
        prop_assert!(s >= v.dim().max(w.dim()) && s <= (v.dim() + w.dim()).min(6));
    }

    #[test]
    fn pairing_is_invariant_up_to_det_power(d in 1usize..=5, seed in any::<u64>(), t in transform()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || BinaryForm::from_ints(&(0..=d).map(|_| rng.gen_range(-6..=6)).collect::<Vec<i64>>());
        let (f, g) = (draw(), draw());
        let lhs = pair(&act(&f, &t), &act(&g, &t)).unwrap();
        prop_assert_eq!(lhs, t.det().pow(d as i32) * pair(&f, &g).unwrap());
    }

    #[test]
    fn orthogonal_dimension_involution_and_equivariance(v in subspace(5), t in transform()) {
        let perp = orthogonal(&v);
        prop_assert_eq!(perp.dim(), 6 - v.dim());
        prop_assert_eq!(orthogonal(&perp), v.clone());
        for f in perp.basis_forms() {
            for g in v.basis_forms() {
                prop_assert!(pair(&f, &g).unwrap().is_zero());
            }
        }
        let moved = act_subspace(&v, &t).unwrap();
        prop_assert_eq!(orthogonal(&moved), act_subspace(&perp, &t).unwrap());
    }

    #[test]
    fn wronskian_degree_and_basis_independence(d in 1usize..=6, seed in any::<u64>(), mix in prop::collection::vec(-4i64..=4, 49)) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b = rng.gen_range(0..d);
        let v = random_subspace(d, b + 1, &mut rng);
        let w = wronskian_form(&v);
        prop_assert_eq!(w.degree, (b + 1) * (d - b));
        prop_assert!(!w.is_zero());
        // another basis: a unitriangular recombination of the echelon basis
        let basis = v.basis_forms();
        let other: Vec<BinaryForm> = (0..=b)
            .map(|i| {
                (i + 1..=b).fold(basis[i].clone(), |acc, j| {
                    acc.add(&basis[j].scale(&rat(mix[i * 7 + j]))).unwrap()
                })
            })
            .collect();
        prop_assert_eq!(wronskian_of(&other).canonical(), w);
    }

    #[test]
    fn count_duality_identity(case_a in any::<bool>(), a in 0usize..=10, b in 0usize..=10) {
        let case = if case_a { CaseTag::A } else { CaseTag::B };
        prop_assume!(case == CaseTag::A || (a >= 2 && b >= 2));
        let (pa, pb, c, d) = grid_params(case, a, b);
        let (da, db, dc, dd) = dual_params(pa, pb, c, d).unwrap();
        prop_assert_eq!(closed_form_count(pa, pb, c, d).unwrap(), closed_form_count(da, db, dc, dd).unwrap());
    }

    #[test]
    fn instance_generation_is_seeded(seed in any::<u64>()) {
        let i1 = generate_instance(1, 0, 1, 4, seed).unwrap();
        let i2 = generate_instance(1, 0, 1, 4, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&i1).unwrap(), serde_json::to_string(&i2).unwrap());
        prop_assert_eq!((i1.va.dim(), i1.vb.dim()), (2, 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// For `(0,0,0,3)` a solution sends `g_b` to a multiple of `g_a`, so the six
    /// solutions can be checked without any rank computation.
    #[test]
    fn structured_cubics_against_direct_oracle(roots in prop::collection::btree_set(-20i64..=20, 6)) {
        let r: Vec<Rational> = roots.into_iter().map(rat).collect();
        let si = make_structured_instance(0, 0, &r[..3], &r[3..]).unwrap();
        let set = enumerate_solutions(&si).unwrap();
        prop_assert_eq!(set.count(), 6);
        prop_assert!(verify_solutions(&si.instance, &set.solutions).unwrap());
        for s in &set.solutions {
            let moved = act(&si.g_b, s);
            prop_assert_eq!(moved.canonical(), si.g_a.canonical());
        }
        let mut distinct = set.solutions.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn structured_count_matches_closed_form(seed in 0u64..1000, ab in prop::sample::select(vec![(1usize, 0usize), (0, 1), (1, 1)])) {
        let (a, b) = ab;
        let (ra, rb) = pglcount::structured::random_roots(a, b, seed);
        let si = make_structured_instance(a, b, &ra, &rb).unwrap();
        let set = enumerate_solutions(&si).unwrap();
        prop_assert_eq!(Rational::from_integer(set.count().into()), closed_form_for_case(CaseTag::A, a, b));
        prop_assert!(verify_solutions(&si.instance, &set.solutions).unwrap());
    }

    #[test]
    fn bott_degree_is_symmetric(a in 0usize..=4, b in 0usize..=4) {
        let p = porteous_class(CaseTag::A);
        let (_, _, _, d) = grid_params(CaseTag::A, a, b);
        prop_assert_eq!(bott_degree(&p, b, d).unwrap(), bott_degree(&p, a, d).unwrap());
        let comps = fixed_components(b, d).unwrap();
        let swapped: Vec<_> = comps.iter().map(|c| c.swap_uv()).collect();
        prop_assert_eq!(bott_degree_on(&p, &swapped, 5).unwrap(), bott_degree_on(&p, &comps, 5).unwrap());
    }

    #[test]
    fn numeric_paths_are_accounted_for(iseed in 0u64..500, sseed in any::<u64>()) {
        let inst = generate_instance(0, 0, 0, 3, iseed).unwrap();
        let run = solve_numeric(&inst, &SolverConfig::with_seed(sseed)).unwrap();
        let ended: usize = [PathStatus::Converged, PathStatus::Diverged, PathStatus::Truncated]
            .iter()
            .map(|&s| run.status_count(s))
            .sum();
        prop_assert_eq!(ended as u64, run.bezout);
        prop_assert_eq!(run.paths.len() as u64, run.bezout);
        prop_assert!(run.set.count() <= run.status_count(PathStatus::Converged));
        for s in &run.set.solutions {
            prop_assert!(s.residual < 1e-8 && s.det > 1e-6 && s.gap > 1e6);
        }
    }
}
