//! The extended affine Weyl group `W̃ = P ⋊ W`.
//!
//! Affine simple reflections are addressed by labels in `S̃`: label `0` is the
//! affine node of the first irreducible factor, labels `1..=r` are the finite
//! simple reflections `s_1, …, s_r`, and label `r + k` is the affine node of
//! factor `k ≥ 1`. The base alcove lies in the dominant chamber.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::root_data::{is_positive, FiniteWeylElt, RootDatum, WEYL_ENUMERATION_LIMIT};

pub type Label = usize;

/// `t^μ · w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtAffElt {
    pub mu: Vec<i64>,
    pub w: FiniteWeylElt,
}

/// A diagram automorphism of the Dynkin diagram, extended to `S̃`, `P` and `W̃`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramAut {
    perm: Vec<usize>,
    affine_perm: Vec<Label>,
    order: usize,
}

impl DiagramAut {
    pub fn identity(datum: &RootDatum) -> Self {
        Self::new(datum, (0..datum.rank()).collect()).expect("identity is an automorphism")
    }

    /// `perm[i]` is the 0-based image of simple index `i`.
    pub fn new(datum: &RootDatum, perm: Vec<usize>) -> Result<Self> {
        if !datum.is_diagram_automorphism(&perm) {
            return Err(Error::Config(format!(
                "permutation {} is not an automorphism of the {} diagram",
                one_based(&perm),
                datum.label()
            )));
        }
        let r = datum.rank();
        let comps = datum.components();
        let mut affine_perm: Vec<Label> = vec![0; r + comps.len()];
        for (i, p) in perm.iter().enumerate() {
            affine_perm[i + 1] = p + 1;
        }
        for (k, c) in comps.iter().enumerate() {
            let image = perm[c.simples[0]];
            let target = comps
                .iter()
                .position(|d| d.simples.contains(&image))
                .expect("image lies in some component");
            affine_perm[affine_label(r, k)] = affine_label(r, target);
        }
        let mut order = 1;
        let mut cur = perm.clone();
        while cur.iter().enumerate().any(|(i, &p)| i != p) {
            cur = cur.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        Ok(Self {
            perm,
            affine_perm,
            order,
        })
    }

    /// Parses a comma separated list of 1-based images, e.g. `"2,1"`.
    pub fn parse(datum: &RootDatum, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() || spec.eq_ignore_ascii_case("id") {
            return Ok(Self::identity(datum));
        }
        let perm = spec
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .map(|v| v - 1)
                    .ok_or_else(|| Error::Config(format!("bad delta entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(datum, perm)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// 1-based spec string, e.g. `"2,1"`.
    pub fn spec(&self) -> String {
        one_based(&self.perm)
    }

    pub fn on_label(&self, a: Label) -> Label {
        self.affine_perm[a]
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        let mut affine_perm = vec![0; self.affine_perm.len()];
        for (i, &p) in self.affine_perm.iter().enumerate() {
            affine_perm[p] = i;
        }
        Self {
            perm,
            affine_perm,
            order: self.order,
        }
    }

    /// `(δμ)_{δ(i)} = μ_i`.
    pub fn act_coweight(&self, mu: &[i64]) -> Vec<i64> {
        let mut out = vec![0; mu.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = mu[i];
        }
        out
    }

    pub fn act_finite(&self, w: &FiniteWeylElt) -> FiniteWeylElt {
        if self.is_identity() {
            return w.clone();
        }
        let r = self.perm.len();
        let m = w.matrix();
        let mut out = vec![0; r * r];
        for i in 0..r {
            for j in 0..r {
                out[self.perm[i] * r + self.perm[j]] = m[i * r + j];
            }
        }
        FiniteWeylElt::from_matrix(out)
    }

    pub fn act(&self, x: &ExtAffElt) -> ExtAffElt {
        ExtAffElt {
            mu: self.act_coweight(&x.mu),
            w: self.act_finite(&x.w),
        }
    }

    /// Closure of a label set under `δ`.
    pub fn close(&self, set: &BTreeSet<Label>) -> BTreeSet<Label> {
        let mut out = set.clone();
        let mut frontier: Vec<Label> = set.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            let b = self.on_label(a);
            if out.insert(b) {
                frontier.push(b);
            }
        }
        out
    }

    /// Orbits of `δ` on the finite simple indices (0-based).
    pub fn finite_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for i in 0..self.perm.len() {
            if seen[i] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                orbit.push(j);
                j = self.perm[j];
            }
            out.push(orbit);
        }
        out
    }
}

fn one_based(perm: &[usize]) -> String {
    perm.iter()
        .map(|p| (p + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn affine_label(rank: usize, component: usize) -> Label {
    if component == 0 {
        0
    } else {
        rank + component
    }
}

/// Reduced expression `s_{i_1} ⋯ s_{i_k} · τ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    pub word: Vec<Label>,
    /// Index into [`AffineWeylGroup::omega`].
    pub tau: usize,
}

/// `x = x_W · t^μ · y` with `μ` dominant and `y` minimal in `W_{I(μ)} y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetForm {
    pub x_w: FiniteWeylElt,
    pub mu: Vec<i64>,
    pub y: FiniteWeylElt,
}

pub struct AffineWeylGroup {
    datum: Arc<RootDatum>,
    simples: Vec<ExtAffElt>,
    label_component: Vec<usize>,
    omega: Vec<ExtAffElt>,
    omega_index: HashMap<ExtAffElt, usize>,
    omega_perm: Vec<Vec<Label>>,
    omega_cyclic: bool,
    simple_index: HashMap<ExtAffElt, Label>,
    layers: Mutex<Vec<Arc<Vec<ExtAffElt>>>>,
    downsets: DashMap<Vec<Label>, Arc<HashSet<ExtAffElt>>>,
}

impl fmt::Debug for AffineWeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineWeylGroup")
            .field("type", &self.datum.label())
            .finish()
    }
}

impl AffineWeylGroup {
    pub fn new(datum: Arc<RootDatum>) -> Arc<Self> {
        let r = datum.rank();
        let comps = datum.components();
        let mut simples = vec![ExtAffElt::identity(r); r + comps.len()];
        let mut label_component = vec![0; r + comps.len()];
        for (k, c) in comps.iter().enumerate() {
            let theta = &datum.positive_roots()[c.highest_root];
            // s_θ(μ) = μ - ⟨μ, θ⟩ θ∨
            let mut m = datum.identity().matrix().to_vec();
            for a in 0..r {
                for b in 0..r {
                    m[a * r + b] -= theta.coroot[a] * theta.coeffs[b];
                }
            }
            simples[affine_label(r, k)] = ExtAffElt {
                mu: theta.coroot.clone(),
                w: FiniteWeylElt::from_matrix(m),
            };
            label_component[affine_label(r, k)] = k;
            for &i in &c.simples {
                label_component[i + 1] = k;
            }
        }
        for i in 0..r {
            simples[i + 1] = ExtAffElt {
                mu: vec![0; r],
                w: datum.reflection(i).clone(),
            };
        }

        let mut g = Self {
            datum,
            simples,
            label_component,
            omega: Vec::new(),
            omega_index: HashMap::new(),
            omega_perm: Vec::new(),
            omega_cyclic: true,
            simple_index: HashMap::new(),
            layers: Mutex::new(Vec::new()),
            downsets: DashMap::new(),
        };
        g.simple_index = g
            .simples
            .iter()
            .enumerate()
            .map(|(a, s)| (s.clone(), a))
            .collect();
        g.build_omega();
        Arc::new(g)
    }

    fn build_omega(&mut self) {
        let d = self.datum.clone();
        let r = d.rank();
        let w0 = d.w0();
        let mut group = vec![self.identity()];
        for c in d.components() {
            let theta = &d.positive_roots()[c.highest_root].coeffs;
            let mut local = vec![self.identity()];
            for &j in &c.simples {
                if theta[j] != 1 {
                    continue;
                }
                let rest: Vec<usize> = (0..r).filter(|&k| k != j).collect();
                let mut mu = vec![0; r];
                mu[j] = 1;
                local.push(ExtAffElt {
                    mu,
                    w: d.weyl_mul(&d.longest_in(&rest), &w0),
                });
            }
            group = group
                .iter()
                .flat_map(|a| local.iter().map(move |b| (a, b)))
                .map(|(a, b)| self.multiply(a, b))
                .collect();
        }
        let n = group.len();
        let generator = group
            .iter()
            .find(|g| self.element_order(g) == n)
            .cloned();
        let listing = match generator {
            Some(g) => {
                let mut out = vec![self.identity()];
                for _ in 1..n {
                    let next = self.multiply(out.last().unwrap(), &g);
                    out.push(next);
                }
                out
            }
            None => {
                self.omega_cyclic = false;
                let mut keyed: Vec<(String, ExtAffElt)> =
                    group.into_iter().map(|x| (self.literal(&x), x)).collect();
                keyed.sort();
                // Identity first.
                keyed.sort_by_key(|(_, x)| !x.is_identity());
                keyed.into_iter().map(|(_, x)| x).collect()
            }
        };
        self.omega_index = listing
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        self.omega = listing;
        self.omega_perm = self
            .omega
            .iter()
            .map(|tau| {
                let inv = self.invert(tau);
                (0..self.simples.len())
                    .map(|a| {
                        let c = self.multiply(&self.multiply(tau, &self.simples[a]), &inv);
                        self.label_of(&c)
                            .expect("conjugation by Ω permutes affine simple reflections")
                    })
                    .collect()
            })
            .collect();
    }

    fn element_order(&self, x: &ExtAffElt) -> usize {
        let mut k = 1;
        let mut cur = x.clone();
        while !cur.is_identity() {
            cur = self.multiply(&cur, x);
            k += 1;
        }
        k
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// `|S̃|`.
    pub fn num_labels(&self) -> usize {
        self.simples.len()
    }

    pub fn labels(&self) -> std::ops::Range<Label> {
        0..self.simples.len()
    }

    /// Labels of finite simple reflections (`S ⊆ S̃`).
    pub fn finite_labels(&self) -> std::ops::RangeInclusive<Label> {
        1..=self.rank()
    }

    pub fn is_finite_label(&self, a: Label) -> bool {
        (1..=self.rank()).contains(&a)
    }

    pub fn component_of_label(&self, a: Label) -> usize {
        self.label_component[a]
    }

    /// All labels belonging to irreducible factor `k`.
    pub fn component_labels(&self, k: usize) -> Vec<Label> {
        self.labels()
            .filter(|&a| self.label_component[a] == k)
            .collect()
    }

    pub fn identity(&self) -> ExtAffElt {
        ExtAffElt::identity(self.rank())
    }

    /// The label `a` with `x = s_a`, if `x` is an affine simple reflection.
    pub fn label_of(&self, x: &ExtAffElt) -> Option<Label> {
        self.simple_index.get(x).copied()
    }

    pub fn simple(&self, a: Label) -> &ExtAffElt {
        &self.simples[a]
    }

    pub fn translation(&self, mu: &[i64]) -> ExtAffElt {
        ExtAffElt {
            mu: mu.to_vec(),
            w: self.datum.identity(),
        }
    }

    pub fn finite(&self, w: &FiniteWeylElt) -> ExtAffElt {
        ExtAffElt {
            mu: vec![0; self.rank()],
            w: w.clone(),
        }
    }

    /// `(t^μ u)(t^ν v) = t^{μ + u(ν)} uv`.
    pub fn multiply(&self, x: &ExtAffElt, y: &ExtAffElt) -> ExtAffElt {
        let mut mu = self.datum.act(&x.w, &y.mu);
        for (a, b) in mu.iter_mut().zip(&x.mu) {
            *a += b;
        }
        ExtAffElt {
            mu,
            w: self.datum.weyl_mul(&x.w, &y.w),
        }
    }

    pub fn try_multiply(&self, x: &ExtAffElt, y: &ExtAffElt) -> Result<ExtAffElt> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.multiply(x, y))
    }

    pub fn check(&self, x: &ExtAffElt) -> Result<()> {
        let r = self.rank();
        if x.mu.len() != r || x.w.matrix().len() != r * r {
            return argument(format!(
                "element does not belong to the group of type {}",
                self.datum.label()
            ));
        }
        Ok(())
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a ExtAffElt>) -> ExtAffElt {
        xs.into_iter()
            .fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }

    pub fn invert(&self, x: &ExtAffElt) -> ExtAffElt {
        let winv = self.datum.weyl_inv(&x.w);
        let mu = self.datum.act(&winv, &x.mu).into_iter().map(|c| -c).collect();
        ExtAffElt { mu, w: winv }
    }

    /// Iwahori–Matsumoto formula.
    pub fn length(&self, x: &ExtAffElt) -> usize {
        let d = &self.datum;
        let mut total = 0i64;
        for a in d.positive_roots() {
            let p = d.pair(&x.mu, &a.coeffs);
            if is_positive(&d.inv_act_root(&x.w, &a.coeffs)) {
                total += p.abs();
            } else {
                total += (p - 1).abs();
            }
        }
        total as usize
    }

    pub fn left_mul_simple(&self, a: Label, x: &ExtAffElt) -> ExtAffElt {
        self.multiply(&self.simples[a], x)
    }

    pub fn right_mul_simple(&self, x: &ExtAffElt, a: Label) -> ExtAffElt {
        self.multiply(x, &self.simples[a])
    }

    /// `s_a · x · s_{δ(a)}`.
    pub fn twisted_conj_simple(&self, a: Label, x: &ExtAffElt, delta: &DiagramAut) -> ExtAffElt {
        self.right_mul_simple(&self.left_mul_simple(a, x), delta.on_label(a))
    }

    /// `τ · x · δ(τ)⁻¹`.
    pub fn twisted_conj(&self, z: &ExtAffElt, x: &ExtAffElt, delta: &DiagramAut) -> ExtAffElt {
        let dz = delta.act(z);
        self.multiply(&self.multiply(z, x), &self.invert(&dz))
    }

    /// Length-zero elements, canonically ordered (powers of a generator when cyclic).
    pub fn omega(&self) -> &[ExtAffElt] {
        &self.omega
    }

    pub fn omega_is_cyclic(&self) -> bool {
        self.omega_cyclic
    }

    pub fn omega_index(&self, x: &ExtAffElt) -> Option<usize> {
        self.omega_index.get(x).copied()
    }

    /// `τ_k s_a τ_k⁻¹ = s_b`.
    pub fn omega_conj_label(&self, k: usize, a: Label) -> Label {
        self.omega_perm[k][a]
    }

    pub fn reduced_word(&self, x: &ExtAffElt) -> ReducedWord {
        let mut word = Vec::new();
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        while len > 0 {
            let (a, next) = self
                .labels()
                .find_map(|a| {
                    let y = self.left_mul_simple(a, &cur);
                    (self.length(&y) < len).then_some((a, y))
                })
                .expect("a nonzero-length element has a left descent");
            word.push(a);
            cur = next;
            len -= 1;
        }
        ReducedWord {
            word,
            tau: self.omega_index(&cur).expect("length-zero element lies in Ω"),
        }
    }

    pub fn from_word(&self, word: &[Label], tau: usize) -> ExtAffElt {
        let w = self.product(word.iter().map(|&a| &self.simples[a]));
        self.multiply(&w, &self.omega[tau])
    }

    pub fn omega_part(&self, x: &ExtAffElt) -> usize {
        self.reduced_word(x).tau
    }

    /// Decomposes `x = x_W t^μ y`.
    pub fn double_coset_form(&self, x: &ExtAffElt) -> DoubleCosetForm {
        let d = &self.datum;
        let (mu, u) = d.dominant_rep(&x.mu);
        let i_mu: Vec<usize> = (0..d.rank()).filter(|&i| mu[i] == 0).collect();
        let mut x_w = d.weyl_inv(&u);
        let mut y = d.weyl_mul(&u, &x.w);
        while let Some(&i) = i_mu.iter().find(|&&i| d.is_left_descent(&y, i)) {
            y = d.weyl_mul(d.reflection(i), &y);
            x_w = d.weyl_mul(&x_w, d.reflection(i));
        }
        DoubleCosetForm { x_w, mu, y }
    }

    pub fn from_double_coset(&self, f: &DoubleCosetForm) -> ExtAffElt {
        self.product([&self.finite(&f.x_w), &self.translation(&f.mu), &self.finite(&f.y)])
    }

    /// `η_δ(x) = δ⁻¹(y) · x_W`.
    pub fn eta_delta(&self, x: &ExtAffElt, delta: &DiagramAut) -> FiniteWeylElt {
        let f = self.double_coset_form(x);
        let y = delta.inverse().act_finite(&f.y);
        self.datum.weyl_mul(&y, &f.x_w)
    }

    /// Membership in the lowest two-sided cell: `x = a · w_J · b` with
    /// lengths adding and `ℓ(w_J) = ℓ(w_0)`. Searches the suffixes of `x`
    /// for one whose left descent set generates such a `W_J`.
    pub fn is_lowest_cell(&self, x: &ExtAffElt) -> bool {
        let target = self.datum.weyl_len(&self.datum.w0());
        let mut seen = HashSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(v) = queue.pop_front() {
            let len = self.length(&v);
            let descents: Vec<Label> = self
                .labels()
                .filter(|&a| self.length(&self.left_mul_simple(a, &v)) < len)
                .collect();
            if self.longest_length(&descents) == target {
                return true;
            }
            for a in descents {
                let u = self.left_mul_simple(a, &v);
                if seen.insert(u.clone()) {
                    queue.push_back(u);
                }
            }
        }
        false
    }

    /// `ℓ(w_J)` for a finite parabolic `W_J`.
    fn longest_length(&self, j: &[Label]) -> usize {
        let mut x = self.identity();
        let mut len = 0;
        while let Some(&a) = j
            .iter()
            .find(|&&a| self.length(&self.right_mul_simple(&x, a)) > len)
        {
            x = self.right_mul_simple(&x, a);
            len += 1;
        }
        len
    }

    /// Letters occurring in a reduced word of the `W_a`-part of `x`.
    pub fn supp(&self, x: &ExtAffElt) -> BTreeSet<Label> {
        self.reduced_word(x).word.into_iter().collect()
    }

    pub fn supp_delta(&self, x: &ExtAffElt, delta: &DiagramAut) -> BTreeSet<Label> {
        delta.close(&self.supp(x))
    }

    /// Demazure product: fold the reduced word of `y` into `x`.
    pub fn demazure_product(&self, x: &ExtAffElt, y: &ExtAffElt) -> ExtAffElt {
        let rw = self.reduced_word(y);
        let mut z = x.clone();
        let mut len = self.length(&z);
        for &a in &rw.word {
            let zs = self.right_mul_simple(&z, a);
            let l = self.length(&zs);
            if l > len {
                z = zs;
                len = l;
            }
        }
        self.multiply(&z, &self.omega[rw.tau])
    }

    /// Bruhat order, via the subword property within a fixed Ω-coset.
    pub fn bruhat_leq(&self, x: &ExtAffElt, y: &ExtAffElt) -> bool {
        let rx = self.reduced_word(x);
        let ry = self.reduced_word(y);
        if rx.tau != ry.tau || rx.word.len() > ry.word.len() {
            return false;
        }
        let target = self.from_word(&rx.word, 0);
        self.downset(&ry.word).contains(&target)
    }

    fn downset(&self, word: &[Label]) -> Arc<HashSet<ExtAffElt>> {
        if let Some(hit) = self.downsets.get(word) {
            return hit.clone();
        }
        let set = match word.split_last() {
            None => Arc::new(HashSet::from([self.identity()])),
            Some((&a, prefix)) => {
                let below = self.downset(prefix);
                let mut set: HashSet<ExtAffElt> = (*below).clone();
                set.extend(below.iter().map(|z| self.right_mul_simple(z, a)));
                Arc::new(set)
            }
        };
        self.downsets.insert(word.to_vec(), set.clone());
        set
    }

    /// All elements of length exactly `len`, sorted.
    pub fn layer(&self, len: usize) -> Arc<Vec<ExtAffElt>> {
        let mut layers = self.layers.lock().expect("layer cache poisoned");
        if layers.is_empty() {
            let mut base = self.omega.clone();
            base.sort();
            layers.push(Arc::new(base));
        }
        while layers.len() <= len {
            let prev = layers.last().unwrap().clone();
            let l = layers.len();
            let next: BTreeSet<ExtAffElt> = prev
                .iter()
                .flat_map(|x| self.labels().map(move |a| (x, a)))
                .map(|(x, a)| self.right_mul_simple(x, a))
                .filter(|y| self.length(y) == l)
                .collect();
            layers.push(Arc::new(next.into_iter().collect()));
        }
        layers[len].clone()
    }

    /// All elements of length at most `max_len`, by length then by order.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<ExtAffElt> {
        (0..=max_len)
            .flat_map(|l| self.layer(l).iter().cloned().collect::<Vec<_>>())
            .collect()
    }

    /// Whether the parabolic subgroup generated by `J ⊆ S̃` is finite.
    pub fn is_finite_parabolic(&self, j: &BTreeSet<Label>) -> bool {
        (0..self.datum.components().len())
            .all(|k| !self.component_labels(k).iter().all(|a| j.contains(a)))
    }

    /// Elements of the finite group `W_J`, `J ⊆ S̃`, in breadth-first order.
    pub fn parabolic_elements(&self, j: &BTreeSet<Label>) -> Result<Vec<ExtAffElt>> {
        if let Some(&bad) = j.iter().find(|&&a| a >= self.num_labels()) {
            return argument(format!("label {bad} is not in S̃"));
        }
        if !self.is_finite_parabolic(j) {
            return argument("parabolic subgroup is infinite");
        }
        let mut seen = HashSet::from([self.identity()]);
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &a in j {
                let y = self.right_mul_simple(&x, a);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
            out.push(x);
            if out.len() > WEYL_ENUMERATION_LIMIT {
                return Err(Error::Resource {
                    what: "parabolic subgroup enumeration".into(),
                    budget: WEYL_ENUMERATION_LIMIT,
                });
            }
        }
        Ok(out)
    }

    /// Canonical text form: `t[μ]` followed by a reduced word of the finite
    /// part, e.g. `t[1,0]*s1*s2`. The identity is `e`.
    pub fn literal(&self, x: &ExtAffElt) -> String {
        let word = self.datum.reduced_word(&x.w);
        let mut parts = Vec::new();
        if x.mu.iter().any(|&c| c != 0) {
            parts.push(format!(
                "t[{}]",
                x.mu.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ));
        }
        parts.extend(word.iter().map(|i| format!("s{}", i + 1)));
        if parts.is_empty() {
            "e".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl ExtAffElt {
    pub fn identity(rank: usize) -> Self {
        Self {
            mu: vec![0; rank],
            w: FiniteWeylElt::identity(rank),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mu.iter().all(|&c| c == 0) && self.w.is_identity()
    }
}
