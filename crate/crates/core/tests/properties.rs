mod oracle;

use awtc::channel::{enumerate_read_sets, Dmc, ReadSet};
use awtc::codes::{code_min_distance, normalize_linear, LinearCode, Normalized, WiretapCode};
use awtc::gf2m::Field;
use awtc::infotheory::{renyi_divergence, Pmf};
use awtc::leakage::{leakage_at, lemma1_leakage};
use awtc::reliability::{error_prob, AdversaryStrategy, StrategyKind};
use awtc::softcover::{bellare_bound, induced_output_pmf, soft_cover_divergence, typical_split, CodebookU};
use awtc::BitVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pmf_from(raw: &[f64]) -> Pmf {
    let s: f64 = raw.iter().sum();
    Pmf::new(raw.iter().map(|x| x / s).collect()).unwrap()
}

fn dmc_from(raw: &[Vec<f64>]) -> Dmc {
    Dmc::new(raw.iter().map(|r| pmf_from(r).probs().to_vec()).collect()).unwrap()
}

prop_compose! {
    fn soft_instance()(n in 1usize..=5, a in 2usize..=3, b in 2usize..=3)
        (words in prop::collection::vec(prop::collection::vec(0..a, n), 1..=6),
         ch in prop::collection::vec(prop::collection::vec(0.05f64..1.0, b), a),
         qu in prop::collection::vec(0.05f64..1.0, a),
         eps in 0.0f64..0.5,
         n in Just(n), a in Just(a))
        -> (CodebookU, Dmc, Pmf, f64)
    {
        (CodebookU::new(n, a, words).unwrap(), dmc_from(&ch), pmf_from(&qu), eps)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_of_alpha_adds_exponents(b in 1u32..=12, e1 in -5000i64..5000, e2 in -5000i64..5000) {
        let f = Field::new(b).unwrap();
        prop_assert_eq!(f.mul(f.pow_alpha(e1), f.pow_alpha(e2)), f.pow_alpha(e1 + e2));
    }

    #[test]
    fn linear_encoding_is_additive(seed in any::<u64>(), n in 2usize..=16, m1 in any::<u64>(), m2 in any::<u64>(),
                                   w1 in any::<u64>(), w2 in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mbits = rng.gen_range(1..=n.min(8));
        let wbits = rng.gen_range(0..=8);
        let c = LinearCode::random(n, mbits, wbits, &mut rng);
        let enc = |m: u64, w: u64| {
            c.encode(&BitVector::from_u64(m & ((1 << mbits) - 1), mbits), &BitVector::from_u64(w & ((1 << wbits) - 1), wbits)).unwrap()
        };
        let mut sum = enc(m1, w1);
        let other = enc(m2, w2);
        for i in 0..n {
            if other.get(i) {
                sum.flip(i);
            }
        }
        prop_assert_eq!(sum, enc(m1 ^ m2, w1 ^ w2));
    }

    #[test]
    fn rank_formula_matches_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let mbits = rng.gen_range(1..n);
        let wbits = rng.gen_range(0..=n - mbits);
        if let Normalized::Code { code, .. } = normalize_linear(&LinearCode::random(n, mbits, wbits, &mut rng)) {
            let rn = rng.gen_range(0..=n);
            for s in enumerate_read_sets(n, rn) {
                let formula = lemma1_leakage(&code, &s).unwrap() as f64;
                let brute = oracle::linear_leakage(code.gm(), code.gw(), s.zero_based());
                prop_assert!((formula - brute).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn capacity_leakage_dominates_uniform(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let c = LinearCode::random(n, rng.gen_range(1..=2), rng.gen_range(0..=2), &mut rng);
        let cb = c.codebook().unwrap();
        let s = ReadSet::random(n, rng.gen_range(0..=n), &mut rng).unwrap();
        let r = leakage_at(&cb, &s).unwrap();
        prop_assert!(r.capacity_mi >= r.uniform_mi);
    }

    #[test]
    fn induced_output_law_is_normalized((cb, ch, qu, eps) in soft_instance()) {
        let p = induced_output_pmf(&cb, &ch).unwrap();
        prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(soft_cover_divergence(&cb, &ch, &qu).unwrap() >= 0.0);
        let d = typical_split(&cb, &ch, &qu, eps).unwrap();
        prop_assert!(d.lemma4_holds);
        prop_assert!((0.0..=1.0).contains(&d.p2_mass));
    }

    #[test]
    fn renyi_order_is_monotone(p in prop::collection::vec(0.01f64..1.0, 4), q in prop::collection::vec(0.01f64..1.0, 4),
                                a in 0.1f64..4.0, da in 0.01f64..2.0) {
        let (p, q) = (pmf_from(&p), pmf_from(&q));
        let lo = renyi_divergence(&p, &q, a).unwrap();
        let hi = renyi_divergence(&p, &q, a + da).unwrap();
        prop_assert!(hi >= lo - 1e-12);
    }

    #[test]
    fn bellare_bound_decreases_in_deviation(k in (2u64..=8).prop_map(|h| 2 * h), mu in 0.1f64..100.0, tau in 0.1f64..10.0) {
        let a = bellare_bound(k, mu, tau).unwrap().raw;
        let b = bellare_bound(k, mu, tau * 1.5).unwrap().raw;
        prop_assert!(b <= a);
    }

    #[test]
    fn oblivious_error_is_monotone_and_zero_inside_radius(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=9);
        let c = LinearCode::random_full_rank(n, rng.gen_range(1..=3), 0, &mut rng).unwrap();
        let cb = c.codebook().unwrap();
        let dmin = code_min_distance(&cb).unwrap();
        let mut last = 0.0;
        for pn in 0..=3.min(n) {
            let r = error_prob(&cb, AdversaryStrategy::new(StrategyKind::ObliviousExhaustive, pn, 0), 0, 0).unwrap();
            prop_assert!(r.max_error >= last);
            if dmin > 2 * pn {
                prop_assert_eq!(r.max_error, 0.0);
            }
            last = r.max_error;
        }
    }
}
