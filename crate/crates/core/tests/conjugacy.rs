use std::collections::HashSet;
use std::sync::Arc;

use adlv_core::affine_weyl::ExtAffElt;
use adlv_core::conjugacy::{Conjugator, ReductionTrace, TwistedGroup};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(type, δ)` pairs exercised below.
const CASES: [(&str, &str); 6] = [("A1", ""), ("A2", ""), ("A2", "2,1"), ("C2", ""), ("G2", ""), ("A3", "3,2,1")];

fn twisted(i: usize) -> Arc<TwistedGroup> {
    let (t, d) = CASES[i];
    TwistedGroup::build(t, d).unwrap()
}

fn random_element(tg: &TwistedGroup, rng: &mut ChaCha8Rng, bound: i64) -> ExtAffElt {
    let d = tg.datum();
    let ws = d.weyl_elements().unwrap();
    ExtAffElt {
        mu: (0..d.rank()).map(|_| rng.gen_range(-bound..=bound)).collect(),
        w: ws[rng.gen_range(0..ws.len())].clone(),
    }
}

#[test]
fn descriptor_is_a_class_invariant() {
    for i in 0..CASES.len() {
        let tg = twisted(i);
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..500 {
            let x = random_element(&tg, &mut rng, 4);
            let z = random_element(&tg, &mut rng, 3);
            let y = tg.twisted_conj(&z, &x);
            assert_eq!(tg.invariant_f(&x), tg.invariant_f(&y), "{:?} {}", CASES[i], tg.literal(&x));
            assert!(tg.same_conjugacy_class(&x, &y).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn reduction_reaches_a_minimal_element(i in 0..CASES.len(), seed in any::<u64>()) {
        let tg = twisted(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&tg, &mut rng, 2);
        let (m, trace) = tg.reduce_to_minimal(&x).unwrap();
        tg.replay(&trace).unwrap();
        let g = tg.group();
        for a in g.labels() {
            prop_assert!(tg.length(&tg.conjugate(Conjugator::Simple(a), &m)) >= tg.length(&m));
        }
        prop_assert!(tg.same_conjugacy_class(&x, &m).unwrap());
        prop_assert_eq!(tg.invariant_f(&x), tg.invariant_f(&m));

        let parsed = ReductionTrace::parse(g, &x, &trace.render(g)).unwrap();
        prop_assert_eq!(&parsed, &trace);

        // A random conjugate lands in the same class, at the same minimal length.
        let z = random_element(&tg, &mut rng, 2);
        let (m2, _) = tg.reduce_to_minimal(&tg.twisted_conj(&z, &x)).unwrap();
        prop_assert_eq!(tg.length(&m2), tg.length(&m));
        prop_assert!(tg.same_conjugacy_class(&m, &m2).unwrap());
        prop_assert_eq!(&tg.class_of(&m).unwrap().key, &tg.class_of(&m2).unwrap().key);
    }
}

#[test]
fn straight_minimal_members_are_strongly_conjugate() {
    for i in 0..5 {
        let tg = twisted(i);
        let max = if tg.datum().rank() == 1 { 6 } else { 4 };
        for c in tg.enumerate_straight_classes(max).unwrap() {
            assert_eq!(
                tg.pair_rho2(&c.descriptor.newton),
                Rational64::from_integer(c.length as i64),
                "{:?} {}",
                CASES[i],
                c.key
            );
            let members: HashSet<ExtAffElt> = tg.minimal_members(&c.rep).unwrap().into_iter().collect();
            let orbit: HashSet<ExtAffElt> = tg.same_length_orbit(&c.rep).unwrap().into_iter().collect();
            assert_eq!(members, orbit, "{:?} {}", CASES[i], c.key);
            assert_eq!(members.len(), c.min_size);
        }
    }
}

#[test]
fn straight_classes_in_rank_one() {
    let tg = twisted(0);
    let keys: Vec<String> = tg
        .enumerate_straight_classes(2)
        .unwrap()
        .iter()
        .map(|c| c.key.clone())
        .collect();
    assert_eq!(keys, ["e", "t[1]*s1", "t[-1]", "t[-2]"]);
}

#[test]
fn kottwitz_group_orders() {
    // |(P/Q)_δ|: the centre of the simply connected cover, coinvariants under δ.
    let got: Vec<i64> = (0..CASES.len()).map(|i| twisted(i).kottwitz_group_order()).collect();
    assert_eq!(got, [2, 3, 1, 2, 1, 2]);
}
