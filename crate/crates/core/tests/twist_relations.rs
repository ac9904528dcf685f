use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistkit_core::catalog::{self, load_builtin};
use twistkit_core::chartab::ClassFunction;
use twistkit_core::twists::*;

fn context(name: &str) -> Arc<TwistContext> {
    TwistContext::new(load_builtin(name, 1000).unwrap().table).unwrap()
}

fn all_relations() -> [Relation; 4] {
    [
        Relation::Quadratic,
        Relation::Polyquadratic,
        Relation::LocallyQuadratic,
        Relation::LocallyPolyquadratic,
    ]
}

/// Random representation of exactly `degree`, built from random irreducibles.
fn random_rep(ctx: &Arc<TwistContext>, degree: u64, rng: &mut ChaCha8Rng) -> RepSpec {
    let degrees = ctx.table().degrees().to_vec();
    let mut mults = vec![0u32; degrees.len()];
    let mut left = degree;
    while left > 0 {
        let fitting: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] <= left).collect();
        let i = fitting[rng.gen_range(0..fitting.len())];
        mults[i] += 1;
        left -= degrees[i];
    }
    RepSpec::new(ctx, mults).unwrap()
}

#[test]
fn dicyclic_pair_is_locally_quadratic_but_not_quadratic() {
    let ctx = context("dic3");
    let (a, b) = dic3_locally_quadratic_pair(&ctx).unwrap();
    assert_eq!(a.degree(), 4);
    let lq = is_locally_quadratic_twist(&a, &b).unwrap();
    let q = is_quadratic_twist(&a, &b).unwrap();
    let lpq = is_locally_polyquadratic_twist(&a, &b).unwrap();
    assert!(lq.holds);
    assert!(!q.holds);
    assert!(lpq.holds);
    for v in [&lq, &q, &lpq] {
        assert!(verify_witness(v, &a, &b).unwrap());
    }
    // Both polyquadratic procedures agree on whatever the answer is.
    let pq = is_polyquadratic_twist(&a, &b).unwrap();
    let oracle = polyquadratic_subgroup_oracle(&a, &b).unwrap();
    assert_eq!(pq.holds, oracle.holds);
}

#[test]
fn faithful_cubics_are_locally_polyquadratic_but_not_polyquadratic() {
    let ctx = context("sg48_3");
    assert_eq!(ctx.quadratic_characters(), &[0]);
    let pairs = faithful_cubic_pairs(&ctx).unwrap();
    assert!(!pairs.is_empty());
    for (a, b) in &pairs {
        assert!(is_locally_polyquadratic_twist(a, b).unwrap().holds);
        assert!(!is_polyquadratic_twist(a, b).unwrap().holds);
        assert!(!polyquadratic_subgroup_oracle(a, b).unwrap().holds);
        assert!(!is_quadratic_twist(a, b).unwrap().holds);
        assert!(!is_locally_quadratic_twist(a, b).unwrap().holds);
    }
    // The only candidate subgroup is the whole group.
    assert_eq!(ctx.elementary_2_subgroups().unwrap().len(), 1);
}

#[test]
fn padding_keeps_the_cubic_pair_a_counterexample() {
    let ctx = context("sg48_3");
    let (a, b) = faithful_cubic_pairs(&ctx).unwrap().remove(0);
    for r in 0..=3 {
        for pad in ctx.representations_of_degree(r) {
            let a2 = a.direct_sum(&pad).unwrap();
            let b2 = b.direct_sum(&pad).unwrap();
            assert!(is_locally_polyquadratic_twist(&a2, &b2).unwrap().holds);
            assert!(!decide(Relation::Polyquadratic, &a2, &b2).unwrap().holds);
        }
    }
}

#[test]
fn searches_find_the_worked_examples() {
    let dic = context("dic3");
    let (a, b) = dic3_locally_quadratic_pair(&dic).unwrap();
    let res = search_counterexamples(&dic, 4, SearchMode::LqNotQ, 1_000_000).unwrap();
    assert!(!res.truncated);
    assert!(res.pairs.contains(&canonical_pair(&dic, a.mults(), b.mults())));

    let big = context("sg48_3");
    let res = search_counterexamples(&big, 3, SearchMode::LpqNotPq, 1_000_000).unwrap();
    for (a, b) in faithful_cubic_pairs(&big).unwrap() {
        let key = if a.mults() <= b.mults() {
            (a.mults().to_vec(), b.mults().to_vec())
        } else {
            (b.mults().to_vec(), a.mults().to_vec())
        };
        assert!(res.pairs.contains(&key));
    }
}

#[test]
fn degree_two_searches_are_empty() {
    for name in catalog::BUILTIN_NAMES {
        let ctx = context(name);
        for mode in [SearchMode::LqNotQ, SearchMode::LpqNotPq] {
            let res = search_counterexamples(&ctx, 2, mode, usize::MAX).unwrap();
            assert!(res.pairs.is_empty(), "{name} {mode:?}");
        }
    }
}

#[test]
fn search_results_do_not_depend_on_thread_count() {
    let ctx = context("dic3");
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| search_counterexamples(&ctx, 4, SearchMode::LqNotQ, usize::MAX).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn implication_lattice_on_small_degrees() {
    for name in ["c4", "c2xc2", "s3", "dic3"] {
        let ctx = context(name);
        for r in 1..=3 {
            let reps = ctx.representations_of_degree(r);
            for a in &reps {
                for b in &reps {
                    let [q, pq, lq, lpq] =
                        all_relations().map(|rel| decide(rel, a, b).unwrap());
                    assert!(!q.holds || lq.holds);
                    assert!(!lq.holds || lpq.holds);
                    assert!(!pq.holds || lpq.holds);
                    assert!(!q.holds || pq.holds);
                    for v in [&q, &pq, &lq, &lpq] {
                        assert!(verify_witness(v, a, b).unwrap(), "{name} {v:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn degree_two_polyquadratic_pairs_have_the_expected_shape() {
    for name in catalog::BUILTIN_NAMES {
        let ctx = context(name);
        let reps = ctx.representations_of_degree(2);
        for a in &reps {
            for b in &reps {
                let v = is_polyquadratic_twist(a, b).unwrap();
                if !v.holds || is_quadratic_twist(a, b).unwrap().holds {
                    continue;
                }
                // Not a single quadratic twist: both sides are sums of two linear
                // characters matched through quadratic characters.
                let Some(Witness::Matching { blocks, .. }) = v.witness else {
                    panic!("missing matching")
                };
                let deg = |i: usize| ctx.table().degrees()[i];
                assert!(blocks.iter().all(|m| deg(m.from) == 1 && deg(m.to) == 1));
                assert_eq!(blocks.iter().map(|m| m.count).sum::<u32>(), 2);
            }
        }
    }
}

#[test]
fn adjoint_identity_for_nontrivial_epsilon() {
    let one = BigRational::from_integer(1.into());
    let mut seen = 0;
    for name in catalog::BUILTIN_NAMES {
        let ctx = context(name);
        let trivial = ClassFunction::trivial(ctx.group());
        let reps = ctx.representations_of_degree(2);
        for a in &reps {
            for b in &reps {
                if !is_locally_polyquadratic_twist(a, b).unwrap().holds {
                    continue;
                }
                let eps = epsilon_character(a, b).unwrap();
                if eps.same_values(&trivial) {
                    continue;
                }
                let (lhs, rhs) = adjoint_multiplicity_identity(a, b).unwrap();
                assert_eq!(lhs, rhs, "{name}");
                assert!(lhs >= one);
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn spec_json_is_checked_against_the_group() {
    let ctx = context("c4");
    let json = RepSpecJson {
        group: "s3".into(),
        mults: vec![1, 0, 0, 0],
    };
    assert!(RepSpec::from_json(&ctx, &json).is_err());
    let json = RepSpecJson {
        group: "c4".into(),
        mults: vec![1, 0],
    };
    assert!(RepSpec::from_json(&ctx, &json).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twisting_is_closed_under_direct_sums(
        seed in any::<u64>(),
        group in prop::sample::select(vec!["c4", "c2xc2", "s3", "dic3", "sg48_3"]),
        d2 in 1u64..4,
        d3 in 1u64..4,
    ) {
        let ctx = context(group);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a2 = random_rep(&ctx, d2, &mut rng);
        let a3 = random_rep(&ctx, d3, &mut rng);
        // Bias the partners toward related representations so positive cases occur.
        let partner = |a: &RepSpec, rng: &mut ChaCha8Rng| {
            let q = ctx.quadratic_characters();
            match rng.gen_range(0..3) {
                0 => a.twist(q[rng.gen_range(0..q.len())]).unwrap(),
                1 => a.clone(),
                _ => random_rep(&ctx, a.degree(), rng),
            }
        };
        let b2 = partner(&a2, &mut rng);
        let b3 = partner(&a3, &mut rng);
        let a1 = a2.direct_sum(&a3).unwrap();
        let b1 = b2.direct_sum(&b3).unwrap();
        for rel in [Relation::Polyquadratic, Relation::LocallyPolyquadratic] {
            let h: Vec<bool> = [(&a1, &b1), (&a2, &b2), (&a3, &b3)]
                .iter()
                .map(|(x, y)| decide(rel, x, y).unwrap().holds)
                .collect();
            let count = h.iter().filter(|&&x| x).count();
            prop_assert!(count != 2, "{rel:?}: {h:?}");
        }
    }

    #[test]
    fn local_criteria_agree_with_square_criteria(
        seed in any::<u64>(),
        group in prop::sample::select(vec!["c4", "c2xc2", "s3", "dic3", "sg48_3"]),
    ) {
        let ctx = context(group);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_rep(&ctx, 4, &mut rng);
        let b = random_rep(&ctx, 4, &mut rng);
        let lq = is_locally_quadratic_twist(&a, &b).unwrap().holds;
        prop_assert_eq!(lq, locally_quadratic_by_squares(&a, &b).unwrap());
        let lpq = is_locally_polyquadratic_twist(&a, &b).unwrap().holds;
        prop_assert_eq!(lpq, locally_polyquadratic_by_adams(&a, &b).unwrap());
    }

    #[test]
    fn matching_agrees_with_subgroup_oracle(
        seed in any::<u64>(),
        group in prop::sample::select(vec!["c2", "c4", "c2xc2", "s3", "dic3", "sg48_3"]),
        degree in 0u64..5,
    ) {
        let ctx = context(group);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_rep(&ctx, degree, &mut rng);
        let q = ctx.quadratic_characters();
        let b = if rng.gen_bool(0.5) {
            a.twist(q[rng.gen_range(0..q.len())]).unwrap()
        } else {
            random_rep(&ctx, degree, &mut rng)
        };
        let m = is_polyquadratic_twist(&a, &b).unwrap();
        let o = polyquadratic_subgroup_oracle(&a, &b).unwrap();
        prop_assert_eq!(m.holds, o.holds);
        prop_assert!(verify_witness(&m, &a, &b).unwrap());
        prop_assert!(verify_witness(&o, &a, &b).unwrap());
    }
}
