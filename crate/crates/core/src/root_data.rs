//! Reduced root systems in the adjoint convention and finite Weyl group
//! arithmetic.
//!
//! All lattice vectors live in the basis of fundamental coweights, so the
//! `i`-th coordinate of a coweight `μ` is `⟨μ, α_i⟩`. Roots are stored in the
//! basis of simple roots. Simple indices are 0-based internally and 1-based
//! in every user-facing literal.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::linalg::{FiniteQuotient, IntMatrix, QVec};

/// Enumerating the whole finite Weyl group is refused beyond this size.
pub const WEYL_ENUMERATION_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// An irreducible factor of the root system.
#[derive(Debug, Clone)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
    /// Global 0-based simple indices belonging to this factor.
    pub simples: Vec<usize>,
    /// Index into [`RootDatum::positive_roots`] of the highest root.
    pub highest_root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Coefficients in the basis of simple roots.
    pub coeffs: Vec<i64>,
    /// The coroot in fundamental-coweight coordinates.
    pub coroot: Vec<i64>,
    pub height: i64,
}

/// Element of the finite Weyl group, stored as its integer matrix acting on
/// fundamental-coweight coordinates (column vectors). The matrix is a
/// faithful, canonical encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteWeylElt {
    mat: Vec<i64>,
}

impl FiniteWeylElt {
    pub fn identity(rank: usize) -> Self {
        let mut mat = vec![0; rank * rank];
        for i in 0..rank {
            mat[i * rank + i] = 1;
        }
        Self { mat }
    }

    pub fn rank(&self) -> usize {
        (self.mat.len() as f64).sqrt().round() as usize
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn matrix(&self) -> &[i64] {
        &self.mat
    }

    pub(crate) fn from_matrix(mat: Vec<i64>) -> Self {
        Self { mat }
    }

    fn entry(&self, r: usize, i: usize, j: usize) -> i64 {
        self.mat[i * r + j]
    }
}

pub struct RootDatum {
    label: String,
    rank: usize,
    cartan: IntMatrix,
    components: Vec<Component>,
    positive_roots: Vec<Root>,
    rho2: Vec<i64>,
    fundamental_group: FiniteQuotient,
    reflections: Vec<FiniteWeylElt>,
    weyl: OnceLock<std::result::Result<Arc<Vec<FiniteWeylElt>>, Error>>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("label", &self.label)
            .field("rank", &self.rank)
            .finish()
    }
}

fn irreducible_cartan(family: Family, n: usize) -> Result<IntMatrix> {
    let bad = || Error::Config(format!("unsupported type {}{}", family.letter(), n));
    let ok = match family {
        Family::A => n >= 1,
        Family::B => n >= 2,
        Family::C => n >= 2,
        Family::D => n >= 4,
        Family::E => (6..=8).contains(&n),
        Family::F => n == 4,
        Family::G => n == 2,
    };
    if !ok || n > 8 {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match family {
        Family::A => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        Family::B => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        Family::C => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        Family::D => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        Family::E => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        Family::F => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        Family::G => link(0, 1, -3, -1),
    }
    Ok(a)
}

fn parse_factor(s: &str) -> Result<(Family, usize)> {
    let mut chars = s.chars();
    let letter = chars.next().ok_or_else(|| Error::Config("empty type label".into()))?;
    let family = match letter.to_ascii_uppercase() {
        'A' => Family::A,
        'B' => Family::B,
        'C' => Family::C,
        'D' => Family::D,
        'E' => Family::E,
        'F' => Family::F,
        'G' => Family::G,
        _ => return Err(Error::Config(format!("unknown type label {s:?}"))),
    };
    let n: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Config(format!("unknown type label {s:?}")))?;
    Ok((family, n))
}

impl RootDatum {
    /// Builds the adjoint root datum for a label such as `"A2"`, `"g2"` or
    /// `"A2xA2"`.
    pub fn build(label: &str) -> Result<Arc<Self>> {
        let factors: Vec<(Family, usize)> = label
            .trim()
            .split(['x', 'X', '*'])
            .map(|f| parse_factor(f.trim()))
            .collect::<Result<_>>()?;
        if factors.is_empty() {
            return Err(Error::Config("empty type label".into()));
        }
        let rank: usize = factors.iter().map(|f| f.1).sum();
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut offset = 0;
        let mut comp_simples = Vec::new();
        for &(family, n) in &factors {
            let block = irreducible_cartan(family, n)?;
            for i in 0..n {
                for j in 0..n {
                    cartan[offset + i][offset + j] = block[i][j];
                }
            }
            comp_simples.push((family, n, (offset..offset + n).collect::<Vec<_>>()));
            offset += n;
        }
        let canonical_label = factors
            .iter()
            .map(|(f, n)| format!("{}{}", f.letter(), n))
            .collect::<Vec<_>>()
            .join("x");

        let positive_roots = generate_positive_roots(&cartan);
        let components = comp_simples
            .into_iter()
            .map(|(family, n, simples)| {
                let highest_root = positive_roots
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| {
                        r.coeffs
                            .iter()
                            .enumerate()
                            .all(|(k, &c)| c == 0 || simples.contains(&k))
                    })
                    .max_by_key(|(_, r)| r.height)
                    .map(|(i, _)| i)
                    .expect("component has roots");
                Component {
                    family,
                    rank: n,
                    simples,
                    highest_root,
                }
            })
            .collect();
        let mut rho2 = vec![0i64; rank];
        for r in &positive_roots {
            for (a, b) in rho2.iter_mut().zip(&r.coeffs) {
                *a += b;
            }
        }
        let fundamental_group =
            FiniteQuotient::new(&cartan, rank).expect("Cartan matrix is nondegenerate");
        let reflections = (0..rank)
            .map(|i| {
                let mut w = FiniteWeylElt::identity(rank);
                // s_i(μ) = μ - μ_i α∨_i, i.e. column i gets -α∨_i added.
                for k in 0..rank {
                    w.mat[k * rank + i] -= cartan[i][k];
                }
                w
            })
            .collect();
        Ok(Arc::new(Self {
            label: canonical_label,
            rank,
            cartan,
            components,
            positive_roots,
            rho2,
            fundamental_group,
            reflections,
            weyl: OnceLock::new(),
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `cartan()[i][j] = ⟨α∨_i, α_j⟩`.
    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// 2ρ in simple-root coordinates.
    pub fn rho2(&self) -> &[i64] {
        &self.rho2
    }

    /// α∨_i in fundamental-coweight coordinates (row `i` of the Cartan matrix).
    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.cartan[i]
    }

    /// Basis of the coroot lattice Q inside P.
    pub fn q_basis(&self) -> &IntMatrix {
        &self.cartan
    }

    /// P/Q as a product of cyclic groups.
    pub fn fundamental_group(&self) -> &FiniteQuotient {
        &self.fundamental_group
    }

    pub fn pair(&self, coweight: &[i64], root_coeffs: &[i64]) -> i64 {
        coweight.iter().zip(root_coeffs).map(|(a, b)| a * b).sum()
    }

    /// ⟨μ, 2ρ⟩.
    pub fn pair_rho2(&self, coweight: &[i64]) -> i64 {
        self.pair(coweight, &self.rho2)
    }

    pub fn identity(&self) -> FiniteWeylElt {
        FiniteWeylElt::identity(self.rank)
    }

    pub fn reflection(&self, i: usize) -> &FiniteWeylElt {
        &self.reflections[i]
    }

    pub fn weyl_mul(&self, a: &FiniteWeylElt, b: &FiniteWeylElt) -> FiniteWeylElt {
        let r = self.rank;
        let mut mat = vec![0i64; r * r];
        for i in 0..r {
            for k in 0..r {
                let x = a.entry(r, i, k);
                if x != 0 {
                    for j in 0..r {
                        mat[i * r + j] += x * b.entry(r, k, j);
                    }
                }
            }
        }
        FiniteWeylElt { mat }
    }

    /// Applies `w` to a coweight.
    pub fn act(&self, w: &FiniteWeylElt, v: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|j| w.entry(r, i, j) * v[j]).sum())
            .collect()
    }

    /// Checked version of [`RootDatum::act`].
    pub fn weyl_act(&self, w: &FiniteWeylElt, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.rank || w.mat.len() != self.rank * self.rank {
            return argument(format!(
                "dimension mismatch: rank {} but vector of length {}",
                self.rank,
                v.len()
            ));
        }
        Ok(self.act(w, v))
    }

    /// `w⁻¹(α)` for a root given in simple-root coordinates.
    pub fn inv_act_root(&self, w: &FiniteWeylElt, root: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|j| (0..r).map(|i| root[i] * w.entry(r, i, j)).sum())
            .collect()
    }

    /// `w⁻¹(α_i)` is row `i` of the matrix; it is negative iff `s_i` is a left descent.
    pub fn is_left_descent(&self, w: &FiniteWeylElt, i: usize) -> bool {
        let r = self.rank;
        (0..r).map(|j| w.entry(r, i, j)).find(|&x| x != 0).unwrap_or(0) < 0
    }

    pub fn is_right_descent(&self, w: &FiniteWeylElt, i: usize) -> bool {
        // w(α_i) < 0 iff w⁻¹ has s_i as a left descent; w(α_i) = w⁻¹⁻¹ α_i.
        let winv = self.weyl_inv(w);
        self.is_left_descent(&winv, i)
    }

    pub fn weyl_len(&self, w: &FiniteWeylElt) -> usize {
        self.positive_roots
            .iter()
            .filter(|a| !is_positive(&self.inv_act_root(w, &a.coeffs)))
            .count()
    }

    /// Reduced word `w = s_{i_1} ⋯ s_{i_k}` found by peeling off the smallest
    /// left descent each time.
    pub fn reduced_word(&self, w: &FiniteWeylElt) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while let Some(i) = (0..self.rank).find(|&i| self.is_left_descent(&cur, i)) {
            word.push(i);
            cur = self.weyl_mul(&self.reflections[i], &cur);
        }
        debug_assert!(cur.is_identity());
        word
    }

    pub fn from_word(&self, word: &[usize]) -> FiniteWeylElt {
        word.iter().fold(self.identity(), |acc, &i| {
            self.weyl_mul(&acc, &self.reflections[i])
        })
    }

    pub fn weyl_inv(&self, w: &FiniteWeylElt) -> FiniteWeylElt {
        let mut word = self.reduced_word(w);
        word.reverse();
        self.from_word(&word)
    }

    /// Longest element of the parabolic subgroup `W_J`.
    pub fn longest_in(&self, j: &[usize]) -> FiniteWeylElt {
        let mut w = self.identity();
        while let Some(&i) = j.iter().find(|&&i| !self.is_right_descent(&w, i)) {
            w = self.weyl_mul(&w, &self.reflections[i]);
        }
        w
    }

    pub fn w0(&self) -> FiniteWeylElt {
        let all: Vec<usize> = (0..self.rank).collect();
        self.longest_in(&all)
    }

    /// Whether `w` lies in `W_J`: it must fix every fundamental coweight outside `J`.
    pub fn in_parabolic(&self, w: &FiniteWeylElt, j: &[usize]) -> bool {
        let r = self.rank;
        (0..r).filter(|k| !j.contains(k)).all(|k| {
            (0..r).all(|i| w.entry(r, i, k) == i64::from(i == k))
        })
    }

    /// Moves `v` into the dominant chamber by simple reflections; returns the
    /// dominant vector and the unique minimal-length `w` with `w(v) = v̄`.
    pub fn dominant_rep(&self, v: &[i64]) -> (Vec<i64>, FiniteWeylElt) {
        let mut cur = v.to_vec();
        let mut w = self.identity();
        while let Some(i) = (0..self.rank).find(|&i| cur[i] < 0) {
            let c = cur[i];
            for (x, a) in cur.iter_mut().zip(&self.cartan[i]) {
                *x -= c * a;
            }
            w = self.weyl_mul(&self.reflections[i], &w);
        }
        (cur, w)
    }

    pub fn dominant_rep_q(&self, v: &QVec) -> (QVec, FiniteWeylElt) {
        let (d, w) = self.dominant_rep(v.numerators());
        (QVec::new(d, v.denominator()), w)
    }

    pub fn is_dominant(&self, v: &[i64]) -> bool {
        v.iter().all(|&x| x >= 0)
    }

    /// `I(μ) = {i : ⟨μ, α_i⟩ = 0}` for dominant `μ`.
    pub fn zero_pairing_set(&self, mu: &[i64]) -> Result<Vec<usize>> {
        if mu.len() != self.rank {
            return argument("dimension mismatch");
        }
        if !self.is_dominant(mu) {
            return argument(format!("coweight {mu:?} is not dominant"));
        }
        Ok((0..self.rank).filter(|&i| mu[i] == 0).collect())
    }

    /// All of `W`, in breadth-first (length-graded) order.
    pub fn weyl_elements(&self) -> Result<Arc<Vec<FiniteWeylElt>>> {
        self.weyl
            .get_or_init(|| {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                let mut queue = VecDeque::new();
                let e = self.identity();
                seen.insert(e.clone());
                queue.push_back(e);
                while let Some(w) = queue.pop_front() {
                    for s in &self.reflections {
                        let ws = self.weyl_mul(&w, s);
                        if seen.insert(ws.clone()) {
                            queue.push_back(ws);
                        }
                    }
                    out.push(w);
                    if seen.len() > WEYL_ENUMERATION_LIMIT {
                        return Err(Error::Resource {
                            what: format!("enumerating W({})", self.label),
                            budget: WEYL_ENUMERATION_LIMIT,
                        });
                    }
                }
                Ok(Arc::new(out))
            })
            .clone()
    }

    /// Minimal coset representatives of `W_J` in `W`.
    pub fn min_coset_reps(&self, j: &[usize], side: CosetSide) -> Result<Vec<FiniteWeylElt>> {
        if let Some(&bad) = j.iter().find(|&&i| i >= self.rank) {
            return argument(format!("simple index {} out of range", bad + 1));
        }
        let all = self.weyl_elements()?;
        Ok(all
            .iter()
            .filter(|w| match side {
                CosetSide::Left => j.iter().all(|&i| !self.is_left_descent(w, i)),
                CosetSide::Right => j.iter().all(|&i| !self.is_right_descent(w, i)),
            })
            .cloned()
            .collect())
    }

    /// Whether `perm` (0-based images of simple indices) preserves the Cartan matrix.
    pub fn is_diagram_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.rank {
            return false;
        }
        let mut seen = vec![false; self.rank];
        for &p in perm {
            if p >= self.rank || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        (0..self.rank).all(|i| (0..self.rank).all(|j| self.cartan[perm[i]][perm[j]] == self.cartan[i][j]))
    }
}

/// `Left` gives `^J W` (minimal in `W_J w`), `Right` gives `W^J` (minimal in `w W_J`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
}

pub(crate) fn is_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).copied().unwrap_or(0) > 0
}

fn generate_positive_roots(cartan: &IntMatrix) -> Vec<Root> {
    let r = cartan.len();
    let mut roots: Vec<Root> = (0..r)
        .map(|i| {
            let mut coeffs = vec![0; r];
            coeffs[i] = 1;
            Root {
                coeffs,
                coroot: cartan[i].clone(),
                height: 1,
            }
        })
        .collect();
    let mut seen: HashSet<Vec<i64>> = roots.iter().map(|x| x.coeffs.clone()).collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..r {
            // s_i(β) = β - ⟨α∨_i, β⟩ α_i ;  s_i(β∨) = β∨ - ⟨β∨, α_i⟩ α∨_i
            let pairing: i64 = (0..r).map(|j| beta.coeffs[j] * cartan[i][j]).sum();
            let mut coeffs = beta.coeffs.clone();
            coeffs[i] -= pairing;
            if !is_positive(&coeffs) || coeffs.iter().any(|&c| c < 0) {
                continue;
            }
            if seen.insert(coeffs.clone()) {
                let cp = beta.coroot[i];
                let coroot = beta
                    .coroot
                    .iter()
                    .zip(&cartan[i])
                    .map(|(b, a)| b - cp * a)
                    .collect();
                let height = coeffs.iter().sum();
                roots.push(Root {
                    coeffs,
                    coroot,
                    height,
                });
            }
        }
        idx += 1;
    }
    roots.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.coeffs.cmp(&b.coeffs)));
    roots
}
