use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistkit_core::weil::*;

const PRIME_POWERS: &[u64] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49];

/// Product of `g` elliptic factors `1 - aT + qT^2` with `a^2 <= 4q`.
fn random_weil(rng: &mut ChaCha8Rng, g: u32, q: u64) -> WeilPolynomial {
    let bound = (4 * q as i64).isqrt();
    let mut p = WeilPolynomial::new(0, q, vec![1]).unwrap();
    for _ in 0..g {
        p = p
            .mul(&WeilPolynomial::elliptic(q, rng.gen_range(-bound..=bound)).unwrap())
            .unwrap();
    }
    p
}

fn even_part_squared(p: &WeilPolynomial) -> Vec<i128> {
    let a = p.coeffs();
    let b = p.sign_twist(-1);
    let b = b.coeffs();
    let mut prod = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    prod
}

#[test]
fn graeffe_identity_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let g = rng.gen_range(1..=3);
        let q = PRIME_POWERS[rng.gen_range(0..PRIME_POWERS.len())];
        let p = random_weil(&mut rng, g, q);
        let bc = base_change(&p, 2).unwrap();
        let mut spread = vec![0i128; 4 * g as usize + 1];
        for (k, c) in bc.coeffs().iter().enumerate() {
            spread[2 * k] = *c;
        }
        assert_eq!(spread, even_part_squared(&p), "{p}");
    }
}

#[test]
fn three_base_change_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let g = rng.gen_range(1..=3);
        let q = PRIME_POWERS[rng.gen_range(0..8)];
        let p = random_weil(&mut rng, g, q);
        for k in 1..=4 {
            let a = base_change(&p, k).unwrap();
            assert_eq!(a, base_change_by_resultant(&p, k).unwrap());
            assert_eq!(a, base_change_by_power_sums(&p, k).unwrap());
        }
    }
}

#[test]
fn full_trace_zero_sweep() {
    let sweep = trace_zero_sweep(100).unwrap();
    assert!(sweep.falsifications.is_empty());
    assert!(sweep.hypothesis_met > 0);
}

proptest! {
    #[test]
    fn base_change_towers(seed in any::<u64>(), g in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = PRIME_POWERS[rng.gen_range(0..6)];
        let p = random_weil(&mut rng, g, q);
        let twice = base_change(&base_change(&p, 2).unwrap(), 2).unwrap();
        prop_assert_eq!(twice, base_change(&p, 4).unwrap());
        let six = base_change(&base_change(&p, 2).unwrap(), 3).unwrap();
        prop_assert_eq!(six, base_change(&base_change(&p, 3).unwrap(), 2).unwrap());
    }

    #[test]
    fn classification_flags_are_monotone(seed in any::<u64>(), g in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = PRIME_POWERS[rng.gen_range(0..PRIME_POWERS.len())];
        let p = random_weil(&mut rng, g, q);
        let p2 = match rng.gen_range(0..3) {
            0 => p.clone(),
            1 => p.sign_twist(-1),
            _ => random_weil(&mut rng, g, q),
        };
        let c = classify_pair(&p, &p2).unwrap();
        prop_assert!(!c.isogenous || c.quadratic_twist);
        prop_assert!(!c.quadratic_twist || c.polyquadratic_twist);
        let line = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<TwistClassification>(&line).unwrap(), c);
    }

    #[test]
    fn text_lines_round_trip(seed in any::<u64>(), g in 0u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = PRIME_POWERS[rng.gen_range(0..PRIME_POWERS.len())];
        let p = random_weil(&mut rng, g, q);
        let parsed = parse_polynomial_lines(&p.to_line()).unwrap();
        prop_assert_eq!(parsed, vec![p]);
    }
}
