use adlv_core::adlv::{Adlv, Dim};
use adlv_core::affine_weyl::ExtAffElt;
use adlv_core::sweep::{self, SweepOptions};
use num_rational::Rational64;
use proptest::prelude::*;

fn el(a: &Adlv, s: &str) -> ExtAffElt {
    a.twisted_group().group().parse_literal(s, true).unwrap()
}

fn int(n: i64) -> Dim {
    Dim::Value(n.into())
}

#[test]
fn rank_one_values() {
    let a = Adlv::build("A1", "").unwrap();
    let one = a.b_from_rep(&el(&a, "e")).unwrap();
    let t = a.b_from_rep(&el(&a, "t[2]")).unwrap();
    let w = el(&a, "w[0 1 0]");
    assert_eq!(a.dim(&w, &one).unwrap().dim, int(2));
    assert_eq!(a.dim(&w, &t).unwrap().dim, int(1));
    assert_eq!(a.virtual_dimension(&w, &one, None).unwrap(), 2.into());
    assert_eq!(a.dim_grassmannian(&[2], &one).unwrap().dim, int(1));
    assert_eq!(a.defect_basic(&one).unwrap(), 0);
    assert!(a.ghkr_check(&w, &one).unwrap().equal.unwrap());
}

#[test]
fn defects_of_basic_elements() {
    for (t, expected) in [("A1", vec![0, 1]), ("A2", vec![0, 2, 2]), ("C2", vec![0, 1])] {
        let a = Adlv::build(t, "").unwrap();
        let got: Vec<i64> = a
            .basic_elements()
            .unwrap()
            .iter()
            .map(|b| a.defect_basic(b).unwrap())
            .collect();
        assert_eq!(got, expected, "{t}");
    }
}

/// Finite Weyl group elements with `b = 1` give classical Deligne-Lusztig
/// varieties, of dimension `ℓ(w)`.
#[test]
fn finite_elements_have_classical_dimension() {
    for t in ["A1", "A2", "B2", "C2", "G2", "A3"] {
        let a = Adlv::build(t, "").unwrap();
        let d = a.twisted_group().datum().clone();
        let g = a.twisted_group().group().clone();
        let one = a.b_from_rep(&g.identity()).unwrap();
        for w in d.weyl_elements().unwrap().iter() {
            let x = g.finite(w);
            assert_eq!(a.dim(&x, &one).unwrap().dim, int(d.weyl_len(w) as i64), "{t} {}", g.literal(&x));
        }
    }
}

/// For `b = t^λ` with `λ` dominant, `X_μ(b)` is nonempty iff `λ ≤ μ`, and
/// then has dimension `⟨μ - λ, ρ⟩`.
#[test]
fn translation_b_in_the_grassmannian() {
    for t in ["A1", "A2", "C2", "G2"] {
        let a = Adlv::build(t, "").unwrap();
        let tg = a.twisted_group();
        let d = tg.datum().clone();
        let g = tg.group().clone();
        let coroots = d.cartan().clone();
        let bound = if t == "G2" { 2 } else { 3 };
        let dominant = sweep::dominant_coweights(&a, bound);
        for mu in &dominant {
            for lambda in &dominant {
                let b = a.b_from_rep(&g.translation(lambda)).unwrap();
                let diff: Vec<Rational64> = mu.iter().zip(lambda).map(|(m, l)| (m - l).into()).collect();
                let coeffs = adlv_core::linalg::solve_rational(&transpose(&coroots), &diff);
                let below = coeffs.is_some_and(|c| c.iter().all(|x| x.is_integer() && *x >= 0.into()));
                let dim = a.dim_grassmannian(mu, &b).unwrap().dim;
                if below {
                    let expected = Rational64::new(d.pair_rho2(mu) - d.pair_rho2(lambda), 2);
                    assert_eq!(dim, Dim::Value(expected), "{t} mu={mu:?} lambda={lambda:?}");
                } else {
                    assert_eq!(dim, Dim::Empty, "{t} mu={mu:?} lambda={lambda:?}");
                }
                assert_eq!(a.mazur_check(mu, &g.translation(lambda), &[]).unwrap(), below);
            }
        }
    }
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

#[test]
fn grassmannian_bound_and_closed_form() {
    for t in ["A1", "A2", "C2"] {
        let a = Adlv::build(t, "").unwrap();
        for b in a.basic_elements().unwrap() {
            let def = a.defect_basic(&b).unwrap();
            for mu in sweep::dominant_coweights(&a, 2) {
                let check = a.grassmannian_check(&mu, &b).unwrap();
                assert!(check.violations.is_empty(), "{t} {mu:?}: {:?}", check.violations);
                assert_eq!(check.coset_max, check.dim);
                if a.twisted_group().kottwitz_of_coweight(&mu) == b.descriptor.kottwitz {
                    assert_eq!(check.dim, Dim::Value(a.grassmannian_closed_form(&mu, &b, def)), "{t} {mu:?}");
                } else {
                    assert_eq!(check.dim, Dim::Empty);
                }
            }
        }
    }
}

#[test]
fn point_counts_match_dimensions() {
    let opts = SweepOptions {
        max_length: 6,
        ..SweepOptions::default()
    };
    for t in ["A1", "A2"] {
        let a = Adlv::build(t, "").unwrap();
        let cases = sweep::point_count_cases(&a, &opts).unwrap();
        assert!(!cases.is_empty());
        for c in &cases {
            assert!(c.zero_iff_empty && c.degree_matches, "{t} {} {}", c.element, c.x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Upper bound `dim ≤ d` for basic `b`, and invariance of the dimension
    /// under conjugation by Ω.
    #[test]
    fn upper_bound_and_omega_invariance(mu in prop::collection::vec(-2i64..=2, 2), wi in 0usize..6, bi in 0usize..3) {
        let a = Adlv::build("A2", "").unwrap();
        let tg = a.twisted_group();
        let g = tg.group();
        let ws = tg.datum().weyl_elements().unwrap();
        let w = ExtAffElt { mu, w: ws[wi].clone() };
        let bs = a.basic_elements().unwrap();
        let b = &bs[bi];
        let dim = a.dim(&w, b).unwrap().dim;
        if tg.kottwitz_class(&w) == b.descriptor.kottwitz {
            let vd = a.virtual_dimension(&w, b, None).unwrap();
            prop_assert!(dim <= Dim::Value(vd));
        } else {
            prop_assert_eq!(&dim, &Dim::Empty);
        }
        for tau in g.omega() {
            let c = tg.twisted_conj(tau, &w);
            prop_assert_eq!(&a.dim(&c, b).unwrap().dim, &dim);
        }
    }
}
