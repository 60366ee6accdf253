use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use adlv_core::affine_weyl::ExtAffElt;
use adlv_core::conjugacy::TwistedGroup;
use adlv_core::hecke::{ClassPolynomials, HeckeAlgebra, HeckeElt};
use adlv_core::poly::XiPoly;
use proptest::prelude::*;

fn setup(t: &str, d: &str) -> (Arc<TwistedGroup>, ClassPolynomials) {
    let tg = TwistedGroup::build(t, d).unwrap();
    (tg.clone(), ClassPolynomials::new(tg))
}

/// Class polynomials straight from the defining recursion: search the
/// same-length twisted conjugates (simple reflections visited in reverse,
/// plus Ω) for any descent, recurse, and key terminals by their class.
struct Naive<'a> {
    tg: &'a TwistedGroup,
    memo: HashMap<ExtAffElt, BTreeMap<String, XiPoly>>,
}

impl Naive<'_> {
    fn table(&mut self, x: &ExtAffElt) -> BTreeMap<String, XiPoly> {
        if let Some(t) = self.memo.get(x) {
            return t.clone();
        }
        let g = self.tg.group();
        let delta = self.tg.delta();
        let len = g.length(x);
        let mut stack = vec![x.clone()];
        let mut seen = HashSet::from([x.clone()]);
        let mut descent = None;
        'search: while let Some(y) = stack.pop() {
            for a in g.labels().rev() {
                let z = g.twisted_conj_simple(a, &y, delta);
                match g.length(&z).cmp(&len) {
                    std::cmp::Ordering::Less => {
                        descent = Some((y, a));
                        break 'search;
                    }
                    std::cmp::Ordering::Equal if seen.insert(z.clone()) => stack.push(z),
                    _ => {}
                }
            }
            for tau in g.omega() {
                let z = g.twisted_conj(tau, &y, delta);
                if seen.insert(z.clone()) {
                    stack.push(z);
                }
            }
        }
        let out = match descent {
            None => BTreeMap::from([(self.tg.class_of(x).unwrap().key.clone(), XiPoly::one())]),
            Some((y, a)) => {
                let one = g.left_mul_simple(a, &y);
                let two = g.right_mul_simple(&one, delta.on_label(a));
                let mut out = BTreeMap::new();
                for (k, p) in self.table(&one) {
                    *out.entry(k).or_insert_with(XiPoly::zero) += &p.shift(1);
                }
                for (k, p) in self.table(&two) {
                    *out.entry(k).or_insert_with(XiPoly::zero) += &p;
                }
                out.retain(|_, p: &mut XiPoly| !p.is_zero());
                out
            }
        };
        self.memo.insert(x.clone(), out.clone());
        out
    }
}

#[test]
fn recursion_matches_naive_oracle() {
    for (t, d, max) in [("A1", "", 8), ("A2", "", 6), ("A2", "2,1", 6), ("C2", "", 6), ("G2", "", 5)] {
        let (tg, cp) = setup(t, d);
        let mut naive = Naive {
            tg: &tg,
            memo: HashMap::new(),
        };
        for x in tg.group().elements_up_to(max) {
            let lib = cp.table(&x).unwrap();
            assert_eq!(lib.classes, naive.table(&x), "{t} δ={d:?} {}", tg.literal(&x));
        }
    }
}

#[test]
fn tables_are_constant_on_strong_conjugacy() {
    for (t, d) in [("A1", ""), ("A2", ""), ("A2", "2,1"), ("C2", ""), ("B2", "")] {
        let (tg, cp) = setup(t, d);
        let g = tg.group();
        for x in g.elements_up_to(8) {
            let tx = cp.table(&x).unwrap();
            for a in g.labels() {
                let y = g.twisted_conj_simple(a, &x, tg.delta());
                if g.length(&y) == g.length(&x) {
                    assert_eq!(tx.classes, cp.table(&y).unwrap().classes, "{t} {}", tg.literal(&x));
                }
            }
            for tau in g.omega() {
                let y = tg.twisted_conj(tau, &x);
                assert_eq!(tx.classes, cp.table(&y).unwrap().classes, "{t} {}", tg.literal(&x));
            }
        }
    }
}

/// Frozen from the naive oracle above.
#[test]
fn rank_one_tables() {
    let (tg, cp) = setup("A1", "");
    let g = tg.group();
    let table = |s: &str| -> Vec<(String, String)> {
        cp.table(&g.parse_literal(s, false).unwrap())
            .unwrap()
            .classes
            .iter()
            .map(|(k, p)| (k.clone(), p.to_string()))
            .collect()
    };
    let pairs = |v: &[(&str, &str)]| -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    assert_eq!(table("s1"), pairs(&[("s1", "1")]));
    assert_eq!(table("w[0 1 0]"), pairs(&[("s1", "1"), ("t[-2]", "ξ")]));
    assert_eq!(table("w[1 0 1]"), pairs(&[("s1", "1"), ("t[-2]", "ξ")]));
    assert_eq!(table("t[2]"), pairs(&[("t[-2]", "1")]));
}

fn arb_pair(t: &'static str, max: usize) -> impl Strategy<Value = (ExtAffElt, ExtAffElt)> {
    let g = TwistedGroup::build(t, "").unwrap().group().clone();
    let xs = g.elements_up_to(max);
    let n = xs.len();
    (0..n, 0..n).prop_map(move |(i, j)| (xs[i].clone(), xs[j].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn products_stay_in_the_positive_cone((x, y) in arb_pair("A2", 5)) {
        let g = TwistedGroup::build("A2", "").unwrap().group().clone();
        let h = HeckeAlgebra::new(g);
        let p = h.product(&x, &y);
        prop_assert!(p.in_positive_cone());
        prop_assert!(h.leading_term_law(&x, &y));
    }

    #[test]
    fn multiplication_is_associative((x, y) in arb_pair("C2", 4), z in 0usize..40) {
        let g = TwistedGroup::build("C2", "").unwrap().group().clone();
        let zs = g.elements_up_to(3);
        let z = &zs[z % zs.len()];
        let h = HeckeAlgebra::new(g.clone());
        let (bx, by, bz) = (HeckeElt::basis(x), HeckeElt::basis(y), HeckeElt::basis(z.clone()));
        prop_assert_eq!(h.mul(&h.mul(&bx, &by), &bz), h.mul(&bx, &h.mul(&by, &bz)));
    }
}
