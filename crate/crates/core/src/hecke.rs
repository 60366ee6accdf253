//! The Iwahori–Hecke algebra of `W̃` in the `T`-basis and the class
//! polynomials of its δ-twisted cocenter.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use dashmap::DashMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine_weyl::{AffineWeylGroup, ExtAffElt, Label};
use crate::conjugacy::{ClassInfo, TwistedGroup};
use crate::error::{integrity, Error, Result};
use crate::poly::{LaurentPoly, XiPoly};

/// A finite combination `Σ c_x T_x`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeckeElt {
    terms: BTreeMap<ExtAffElt, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: ExtAffElt) -> Self {
        Self::term(x, LaurentPoly::one())
    }

    pub fn term(x: ExtAffElt, c: LaurentPoly) -> Self {
        let mut h = Self::zero();
        h.add_term(x, &c);
        h
    }

    pub fn add_term(&mut self, x: ExtAffElt, c: &LaurentPoly) {
        let sum = match self.terms.get(&x) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&x);
        } else {
            self.terms.insert(x, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<ExtAffElt, LaurentPoly> {
        &self.terms
    }

    pub fn coeff(&self, x: &ExtAffElt) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (x, c) in &o.terms {
            out.add_term(x.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (x, c) in &o.terms {
            out.add_term(x.clone(), &c.scale(-1));
        }
        out
    }

    /// Whether every coefficient lies in `Z₊[ξ]`.
    pub fn in_positive_cone(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.to_xi().is_some_and(|p| p.is_nonnegative()))
    }
}

/// `T`-basis arithmetic over a fixed `W̃`.
#[derive(Debug, Clone)]
pub struct HeckeAlgebra {
    group: Arc<AffineWeylGroup>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<AffineWeylGroup>) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &Arc<AffineWeylGroup> {
        &self.group
    }

    /// `T_x T_s = T_{xs}` if `xs > x`, else `(v - v⁻¹) T_x + T_{xs}`.
    pub fn mul_basis_simple(&self, x: &ExtAffElt, a: Label) -> HeckeElt {
        let xs = self.group.right_mul_simple(x, a);
        let mut out = HeckeElt::basis(xs.clone());
        if self.group.length(&xs) < self.group.length(x) {
            out.add_term(x.clone(), &LaurentPoly::xi());
        }
        out
    }

    pub fn mul_simple(&self, h: &HeckeElt, a: Label) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, c) in &h.terms {
            for (y, d) in &self.mul_basis_simple(x, a).terms {
                out.add_term(y.clone(), &(c * d));
            }
        }
        out
    }

    /// `h · T_y`, expanding `y` as a reduced word followed by `τ`.
    pub fn mul_basis(&self, h: &HeckeElt, y: &ExtAffElt) -> HeckeElt {
        let rw = self.group.reduced_word(y);
        let mut out = h.clone();
        for &a in &rw.word {
            out = self.mul_simple(&out, a);
        }
        let tau = &self.group.omega()[rw.tau];
        let mut shifted = HeckeElt::zero();
        for (x, c) in &out.terms {
            shifted.add_term(self.group.multiply(x, tau), c);
        }
        shifted
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (y, d) in &b.terms {
            let part = self.mul_basis(a, y);
            for (x, c) in &part.terms {
                out.add_term(x.clone(), &(c * d));
            }
        }
        out
    }

    /// `T_x T_y`.
    pub fn product(&self, x: &ExtAffElt, y: &ExtAffElt) -> HeckeElt {
        self.mul_basis(&HeckeElt::basis(x.clone()), y)
    }

    /// Checks `T_x T_y ∈ ξ^{ℓ(x)+ℓ(y)-ℓ(x∗y)} T_{x∗y} + H̃₊`.
    pub fn leading_term_law(&self, x: &ExtAffElt, y: &ExtAffElt) -> bool {
        let g = &self.group;
        let star = g.demazure_product(x, y);
        let Some(k) = (g.length(x) + g.length(y)).checked_sub(g.length(&star)) else {
            return false;
        };
        let lead = HeckeElt::term(star, XiPoly::monomial(k, 1).to_laurent());
        let rest = self.product(x, y).sub(&lead);
        rest.in_positive_cone()
    }
}

/// How the recursion picks the pair `(w̃₁, i)` when several exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Breadth-first order, smallest index first.
    First,
    /// The last descent found in breadth-first order.
    Last,
    /// Uniformly among all descents, seeded per element.
    Random(u64),
}

/// `f_{w̃,O}` for every class `O` with a nonzero polynomial, keyed by the
/// class key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPolyTable {
    pub source: String,
    pub length: usize,
    pub classes: BTreeMap<String, XiPoly>,
}

impl ClassPolyTable {
    pub fn get(&self, key: &str) -> XiPoly {
        self.classes.get(key).cloned().unwrap_or_default()
    }

    /// Sum of constant terms; 1 for every well-formed table.
    pub fn specialization_total(&self) -> i64 {
        self.classes.values().map(XiPoly::at_v_one).sum()
    }
}

impl fmt::Display for ClassPolyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in &self.classes {
            writeln!(f, "{k}\t{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathIndependenceReport {
    pub element: String,
    pub trials: usize,
    /// Literal descriptions of strategies that disagreed with the first.
    pub divergent: Vec<String>,
}

impl PathIndependenceReport {
    pub fn ok(&self) -> bool {
        self.divergent.is_empty()
    }
}

/// Memoized class-polynomial recursion for one `(W̃, δ)`.
pub struct ClassPolynomials {
    tg: Arc<TwistedGroup>,
    memo: DashMap<(Strategy, ExtAffElt), Arc<ClassPolyTable>>,
    infos: DashMap<String, Arc<ClassInfo>>,
}

impl fmt::Debug for ClassPolynomials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassPolynomials")
            .field("group", &self.tg)
            .field("memo", &self.memo.len())
            .finish()
    }
}

fn element_seed(seed: u64, x: &ExtAffElt) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    seed ^ h.finish()
}

impl ClassPolynomials {
    pub fn new(tg: Arc<TwistedGroup>) -> Self {
        Self {
            tg,
            memo: DashMap::new(),
            infos: DashMap::new(),
        }
    }

    pub fn twisted_group(&self) -> &Arc<TwistedGroup> {
        &self.tg
    }

    /// The class with the given key, as produced in a table.
    pub fn class_info(&self, key: &str) -> Result<Arc<ClassInfo>> {
        if let Some(info) = self.infos.get(key).map(|i| i.clone()) {
            return Ok(info);
        }
        let rep = self.tg.group().parse_literal(key, false)?;
        let info = self.tg.class_of(&rep)?;
        if info.key != key {
            return integrity(format!("{key} is not a class key (class key is {})", info.key));
        }
        self.infos.insert(key.to_string(), info.clone());
        Ok(info)
    }

    pub fn table(&self, x: &ExtAffElt) -> Result<Arc<ClassPolyTable>> {
        self.table_with(x, Strategy::First)
    }

    /// Seeds the memo with a table loaded from elsewhere; a conflicting
    /// existing entry is an integrity failure.
    pub fn insert(&self, x: &ExtAffElt, table: ClassPolyTable) -> Result<()> {
        self.store(Strategy::First, x, Arc::new(table)).map(|_| ())
    }

    /// Every memoized table of the default strategy, ordered by length and
    /// source literal.
    pub fn memoized(&self) -> Vec<(ExtAffElt, Arc<ClassPolyTable>)> {
        let mut out: Vec<(ExtAffElt, Arc<ClassPolyTable>)> = self
            .memo
            .iter()
            .filter(|e| e.key().0 == Strategy::First)
            .map(|e| (e.key().1.clone(), e.value().clone()))
            .collect();
        out.sort_by(|a, b| (a.1.length, &a.1.source).cmp(&(b.1.length, &b.1.source)));
        out
    }

    fn store(&self, s: Strategy, x: &ExtAffElt, t: Arc<ClassPolyTable>) -> Result<Arc<ClassPolyTable>> {
        let existing = self.memo.entry((s, x.clone())).or_insert_with(|| t.clone()).clone();
        if existing != t {
            return integrity(format!(
                "conflicting class polynomials for {}",
                self.tg.literal(x)
            ));
        }
        Ok(existing)
    }

    /// All `(w̃₁, i)` with `w̃₁` in the same-length orbit of `x` and
    /// `ℓ(s_i w̃₁ s_{δ(i)}) < ℓ(w̃₁)`, in breadth-first order. With
    /// `first_only` the search stops at the first one.
    fn descents(&self, x: &ExtAffElt, first_only: bool) -> Result<Vec<(ExtAffElt, Label)>> {
        let g = self.tg.group();
        let len = self.tg.length(x);
        let mut found = Vec::new();
        let mut nodes = vec![x.clone()];
        let mut seen: HashSet<ExtAffElt> = HashSet::from([x.clone()]);
        let mut head = 0;
        while head < nodes.len() {
            let y = nodes[head].clone();
            for a in g.labels() {
                let z = g.twisted_conj_simple(a, &y, self.tg.delta());
                let lz = self.tg.length(&z);
                if lz < len {
                    found.push((y.clone(), a));
                    if first_only {
                        return Ok(found);
                    }
                } else if lz == len && seen.insert(z.clone()) {
                    nodes.push(z);
                }
            }
            for tau in g.omega().iter().skip(1) {
                let z = self.tg.twisted_conj(tau, &y);
                if seen.insert(z.clone()) {
                    nodes.push(z);
                }
            }
            head += 1;
            if nodes.len() > self.tg.budget() {
                return Err(Error::Resource {
                    what: "class polynomial orbit search".into(),
                    budget: self.tg.budget(),
                });
            }
        }
        Ok(found)
    }

    pub fn table_with(&self, x: &ExtAffElt, strategy: Strategy) -> Result<Arc<ClassPolyTable>> {
        if let Some(t) = self.memo.get(&(strategy, x.clone())).map(|t| t.clone()) {
            return Ok(t);
        }
        let g = self.tg.group();
        let len = self.tg.length(x);
        let choice = match strategy {
            Strategy::First => self.descents(x, true)?.into_iter().next(),
            Strategy::Last => self.descents(x, false)?.pop(),
            Strategy::Random(seed) => {
                let all = self.descents(x, false)?;
                let mut rng = ChaCha8Rng::seed_from_u64(element_seed(seed, x));
                all.choose(&mut rng).cloned()
            }
        };
        let table = match choice {
            None => {
                let info = self.tg.class_of(x)?;
                self.infos.insert(info.key.clone(), info.clone());
                ClassPolyTable {
                    source: self.tg.literal(x),
                    length: len,
                    classes: BTreeMap::from([(info.key.clone(), XiPoly::one())]),
                }
            }
            Some((y, a)) => {
                let one = g.left_mul_simple(a, &y);
                let two = g.right_mul_simple(&one, self.tg.delta().on_label(a));
                let t1 = self.table_with(&one, strategy)?;
                let t2 = self.table_with(&two, strategy)?;
                let mut classes: BTreeMap<String, XiPoly> = BTreeMap::new();
                for (k, p) in &t1.classes {
                    *classes.entry(k.clone()).or_default() += &p.shift(1);
                }
                for (k, p) in &t2.classes {
                    *classes.entry(k.clone()).or_default() += p;
                }
                classes.retain(|_, p| !p.is_zero());
                ClassPolyTable {
                    source: self.tg.literal(x),
                    length: len,
                    classes,
                }
            }
        };
        self.store(strategy, x, Arc::new(table))
    }

    /// Recomputes the table of `x` under `trials` strategies (first, last,
    /// then seeded random choices) and reports disagreements.
    pub fn verify_path_independence(
        &self,
        x: &ExtAffElt,
        trials: usize,
        seed: u64,
    ) -> Result<PathIndependenceReport> {
        let strategies: Vec<Strategy> = [Strategy::First, Strategy::Last]
            .into_iter()
            .chain((0..).map(|k| Strategy::Random(seed.wrapping_add(k))))
            .take(trials.max(2))
            .collect();
        let reference = self.table_with(x, strategies[0])?;
        let mut divergent = Vec::new();
        for s in &strategies[1..] {
            if *self.table_with(x, *s)? != *reference {
                divergent.push(format!("{s:?}"));
            }
        }
        Ok(PathIndependenceReport {
            element: self.tg.literal(x),
            trials: strategies.len(),
            divergent,
        })
    }

    /// Checks the structural properties of a table: nonnegativity, parity
    /// and degree bounds, and the `v = 1` indicator.
    pub fn check_table(&self, x: &ExtAffElt, table: &ClassPolyTable) -> Result<Vec<String>> {
        let mut problems = Vec::new();
        let len = self.tg.length(x);
        let mut own = HashMap::new();
        for (key, p) in &table.classes {
            let info = self.class_info(key)?;
            if !p.is_nonnegative() {
                problems.push(format!("{key}: negative coefficient in {p}"));
            }
            if info.length > len || !p.has_parity(len - info.length) {
                problems.push(format!("{key}: parity or degree violation in {p}"));
            }
            if p.degree().is_some_and(|d| d > len - info.length.min(len)) {
                problems.push(format!("{key}: degree exceeds {}", len - info.length));
            }
            own.insert(key.clone(), p.at_v_one());
        }
        let home = self.tg.class_of(x)?;
        for (key, c) in own {
            let expected = i64::from(key == home.key);
            if c != expected {
                problems.push(format!("{key}: constant term {c}, expected {expected}"));
            }
        }
        if table.specialization_total() != 1 {
            problems.push("constant terms do not sum to 1".into());
        }
        Ok(problems)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::RootDatum;

    fn setup(label: &str) -> (Arc<TwistedGroup>, ClassPolynomials, HeckeAlgebra) {
        let tg = TwistedGroup::build(label, "").unwrap();
        let h = HeckeAlgebra::new(tg.group().clone());
        (tg.clone(), ClassPolynomials::new(tg), h)
    }

    fn el(tg: &TwistedGroup, s: &str) -> ExtAffElt {
        tg.group().parse_literal(s, false).unwrap()
    }

    #[test]
    fn basis_products() {
        let (tg, _, h) = setup("A1");
        let s1 = el(&tg, "s1");
        let e = tg.group().identity();
        assert_eq!(h.product(&e, &s1), HeckeElt::basis(s1.clone()));
        let sq = h.product(&s1, &s1);
        let mut expected = HeckeElt::basis(e.clone());
        expected.add_term(s1.clone(), &LaurentPoly::xi());
        assert_eq!(sq, expected);
        let s0s1 = el(&tg, "s0*s1");
        assert_eq!(h.mul_basis_simple(&s0s1, 0), HeckeElt::basis(el(&tg, "w[0 1 0]")));
        let t = el(&tg, "t[2]");
        assert_eq!(h.product(&t, &t), HeckeElt::basis(el(&tg, "t[4]")));
        let tau = el(&tg, "tau");
        assert_eq!(h.product(&tau, &s1), HeckeElt::basis(el(&tg, "tau*s1")));
    }

    #[test]
    fn multiplication_is_associative() {
        let g = AffineWeylGroup::new(RootDatum::build("A2").unwrap());
        let h = HeckeAlgebra::new(g.clone());
        let xs = g.elements_up_to(2);
        for x in xs.iter().step_by(3) {
            for y in xs.iter().step_by(4) {
                for z in xs.iter().step_by(5) {
                    let a = h.mul(&h.product(x, y), &HeckeElt::basis(z.clone()));
                    let b = h.mul(&HeckeElt::basis(x.clone()), &h.product(y, z));
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn rank_one_tables() {
        let (tg, cp, _) = setup("A1");
        let t = el(&tg, "t[2]");
        let tt = cp.table(&t).unwrap();
        assert_eq!(tt.classes.len(), 1);
        assert_eq!(tt.get(&tg.class_of(&t).unwrap().key), XiPoly::one());

        let x = el(&tg, "w[0 1 0]");
        let table = cp.table(&x).unwrap();
        let tk = tg.class_of(&t).unwrap().key.clone();
        let sk = tg.class_of(&el(&tg, "s1")).unwrap().key.clone();
        assert_eq!(
            table.classes,
            BTreeMap::from([(tk.clone(), XiPoly::monomial(1, 1)), (sk.clone(), XiPoly::one())])
        );
        let y = el(&tg, "t[-2]*s1");
        assert_eq!(cp.table(&y).unwrap().classes, table.classes);
        assert!(cp.check_table(&x, &table).unwrap().is_empty());
    }

    #[test]
    fn path_independence_small() {
        let (tg, cp, _) = setup("A1");
        let r = cp.verify_path_independence(&el(&tg, "t[4]*s1"), 4, 0).unwrap();
        assert!(r.ok(), "{r:?}");
        let (a2, cp2, _) = setup("A2");
        for x in a2.group().elements_up_to(6) {
            let r = cp2.verify_path_independence(&x, 3, 7).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn positive_cone_is_closed() {
        let (tg, _, h) = setup("C2");
        let xs = tg.group().elements_up_to(3);
        for x in xs.iter().step_by(7) {
            for y in xs.iter().step_by(5) {
                assert!(h.product(x, y).in_positive_cone());
                assert!(h.leading_term_law(x, y));
            }
        }
    }
}
