//! Exhaustive checks of the dimension formulas over all elements up to a
//! length bound. Each sweep returns one row per evaluated case and counts
//! violations.

use std::fmt;
use std::fmt::Write as _;

use num_rational::Rational64;

use crate::adlv::{Adlv, BElement, Dim};
use crate::affine_weyl::ExtAffElt;
use crate::error::Result;
use crate::linalg::format_rational;
use crate::par::{self, Execution};
use crate::poly::QPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Ghkr,
    UpperBound,
    PathIndependence,
    Grassmannian,
    Mazur,
    Tables,
    PointCount,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Ghkr,
        Check::UpperBound,
        Check::PathIndependence,
        Check::Grassmannian,
        Check::Mazur,
        Check::Tables,
        Check::PointCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Ghkr => "ghkr",
            Check::UpperBound => "upper-bound",
            Check::PathIndependence => "path-independence",
            Check::Grassmannian => "grassmannian",
            Check::Mazur => "mazur",
            Check::Tables => "tables",
            Check::PointCount => "point-count",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SweepRow {
    pub element: String,
    pub b: String,
    pub value: String,
    pub expected: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SweepReport {
    pub check: String,
    pub rows: Vec<SweepRow>,
    pub violations: usize,
    /// Cases outside the hypotheses of the check.
    pub skipped: usize,
}

impl SweepReport {
    fn from_rows(check: Check, rows: Vec<SweepRow>, skipped: usize) -> Self {
        let violations = rows.iter().filter(|r| !r.ok).count();
        Self {
            check: check.name().to_string(),
            rows,
            violations,
            skipped,
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("element\tb\tvalue\texpected\tstatus\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.element,
                r.b,
                r.value,
                r.expected,
                if r.ok { "ok" } else { "VIOLATION" }
            );
        }
        out
    }
}

/// Parameters shared by all sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub max_length: usize,
    /// Bound on `⟨μ, 2ρ⟩` for the sweeps over dominant coweights.
    pub max_rho2: i64,
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            max_length: 4,
            max_rho2: 4,
            trials: 3,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

fn row(element: String, b: &str, value: impl ToString, expected: impl ToString, ok: bool) -> SweepRow {
    SweepRow {
        element,
        b: b.to_string(),
        value: value.to_string(),
        expected: expected.to_string(),
        ok,
    }
}

/// Dominant coweights `μ` with `⟨μ, 2ρ⟩ ≤ bound`.
pub fn dominant_coweights(a: &Adlv, bound: i64) -> Vec<Vec<i64>> {
    let d = a.twisted_group().datum();
    let r = d.rank();
    let mut out = Vec::new();
    let mut mu = vec![0i64; r];
    loop {
        if d.pair_rho2(&mu) <= bound {
            out.push(mu.clone());
        }
        let mut k = 0;
        loop {
            if k == r {
                out.sort_by_key(|m| (d.pair_rho2(m), m.clone()));
                return out;
            }
            mu[k] += 1;
            if d.pair_rho2(&mu) <= bound {
                break;
            }
            mu[k] = 0;
            k += 1;
        }
    }
}

/// `b` from straight classes with a member of length `≤ max_len`, each
/// paired with its defect when it is known: computed for basic `b`, zero
/// for regular Newton points, unknown otherwise.
pub fn straight_b_elements(a: &Adlv, max_len: usize, exec: Execution) -> Result<Vec<(BElement, Option<i64>)>> {
    let tg = a.twisted_group();
    let classes = tg.enumerate_straight_classes_with(max_len, exec)?;
    let mut out = Vec::new();
    for c in classes {
        let b = a.b_from_rep(&c.rep)?;
        let def = if b.basic {
            Some(a.defect_basic(&b)?)
        } else if (0..tg.datum().rank()).all(|k| b.descriptor.newton.coord(k) != 0.into()) {
            Some(0)
        } else {
            None
        };
        out.push((b, def));
    }
    Ok(out)
}

fn elements(a: &Adlv, max_len: usize) -> Vec<ExtAffElt> {
    a.twisted_group().group().elements_up_to(max_len)
}

pub fn run(a: &Adlv, check: Check, opts: &SweepOptions) -> Result<SweepReport> {
    match check {
        Check::Ghkr => ghkr(a, opts),
        Check::UpperBound => upper_bound(a, opts),
        Check::PathIndependence => path_independence(a, opts),
        Check::Grassmannian => grassmannian(a, opts),
        Check::Mazur => mazur(a, opts),
        Check::Tables => tables(a, opts),
        Check::PointCount => point_count(a, opts),
    }
}

/// `dim X_w̃(b) = d_w̃(b)` for lowest-cell `w̃` with full `supp_δ(η_δ(w̃))`
/// and basic `b` with matching Kottwitz class.
pub fn ghkr(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let tg = a.twisted_group();
    let basics = a.basic_elements()?;
    let xs: Vec<ExtAffElt> = elements(a, opts.max_length)
        .into_iter()
        .filter(|w| a.ghkr_hypotheses(w))
        .collect();
    let rows = par::try_map(opts.exec, &xs, |w| {
        let kappa = tg.kottwitz_class(w);
        let mut rows = Vec::new();
        for b in basics.iter().filter(|b| b.descriptor.kottwitz == kappa) {
            let r = a.ghkr_check(w, b)?;
            let ok = r.dim == Dim::Value(r.virtual_dim) && !r.violated();
            rows.push(row(tg.literal(w), &b.label, r.dim, format_rational(r.virtual_dim), ok));
        }
        Ok(rows)
    })?;
    Ok(SweepReport::from_rows(Check::Ghkr, rows.into_iter().flatten().collect(), 0))
}

/// `dim X_w̃(b) ≤ d_w̃(b)` for every `w̃` and straight `b` with matching
/// Kottwitz class whose defect is known.
pub fn upper_bound(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let tg = a.twisted_group();
    let bs = straight_b_elements(a, opts.max_length, opts.exec)?;
    let xs = elements(a, opts.max_length);
    let out = par::try_map(opts.exec, &xs, |w| {
        let kappa = tg.kottwitz_class(w);
        let mut rows = Vec::new();
        let mut skipped = 0;
        for (b, def) in bs.iter().filter(|(b, _)| b.descriptor.kottwitz == kappa) {
            let Some(def) = def else {
                skipped += 1;
                continue;
            };
            let dim = a.dim(w, b)?.dim;
            let vd = a.virtual_dimension(w, b, Some(*def))?;
            rows.push(row(tg.literal(w), &b.label, dim, format_rational(vd), dim <= Dim::Value(vd)));
        }
        Ok((rows, skipped))
    })?;
    let skipped = out.iter().map(|(_, s)| s).sum();
    let rows = out.into_iter().flat_map(|(r, _)| r).collect();
    Ok(SweepReport::from_rows(Check::UpperBound, rows, skipped))
}

pub fn path_independence(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let cp = a.class_polynomials();
    let xs = elements(a, opts.max_length);
    let rows = par::try_map(opts.exec, &xs, |w| {
        let r = cp.verify_path_independence(w, opts.trials, opts.seed)?;
        Ok(row(r.element.clone(), "-", r.trials, r.divergent.join(","), r.ok()))
    })?;
    Ok(SweepReport::from_rows(Check::PathIndependence, rows, 0))
}

/// `dim X_μ(b)` against `⟨μ - ν̄_b, ρ⟩ - ½ def(b)` and against the maximum
/// over the double coset, for basic `b`.
pub fn grassmannian(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let tg = a.twisted_group();
    let basics = a.basic_elements()?;
    let mus = dominant_coweights(a, opts.max_rho2);
    let rows = par::try_map(opts.exec, &mus, |mu| {
        let kappa = tg.kottwitz_of_coweight(mu);
        let mut rows = Vec::new();
        for b in basics.iter().filter(|b| b.descriptor.kottwitz == kappa) {
            let def = a.defect_basic(b)?;
            let closed = a.grassmannian_closed_form(mu, b, def);
            let check = a.grassmannian_check(mu, b)?;
            let ok = check.dim == Dim::Value(closed)
                && check.coset_max == check.dim
                && check.violations.is_empty();
            let value = format!("{} coset_max={}", check.dim, check.coset_max);
            rows.push(row(format!("mu={mu:?}"), &b.label, value, format_rational(closed), ok));
        }
        Ok(rows)
    })?;
    Ok(SweepReport::from_rows(Check::Grassmannian, rows.into_iter().flatten().collect(), 0))
}

/// Mazur's criterion with `J = S` against nonemptiness of `X_μ(b)`.
pub fn mazur(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let g = a.twisted_group().group();
    let all: Vec<usize> = (0..g.rank()).collect();
    let basics = a.basic_elements()?;
    let mus = dominant_coweights(a, opts.max_rho2);
    let rows = par::try_map(opts.exec, &mus, |mu| {
        let mut rows = Vec::new();
        for b in &basics {
            let rep = g.parse_literal(&b.label, false)?;
            let m = a.mazur_check(mu, &rep, &all)?;
            let nonempty = a.dim_grassmannian(mu, b)?.nonempty();
            rows.push(row(format!("mu={mu:?}"), &b.label, m, nonempty, m == nonempty));
        }
        Ok(rows)
    })?;
    Ok(SweepReport::from_rows(Check::Mazur, rows.into_iter().flatten().collect(), 0))
}

/// Nonnegativity, parity, degree and `v = 1` checks on every table.
pub fn tables(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let cp = a.class_polynomials();
    let tg = a.twisted_group();
    let xs = elements(a, opts.max_length);
    let rows = par::try_map(opts.exec, &xs, |w| {
        let t = cp.table(w)?;
        let problems = cp.check_table(w, &t)?;
        Ok(row(tg.literal(w), "-", t.classes.len(), problems.join("; "), problems.is_empty()))
    })?;
    Ok(SweepReport::from_rows(Check::Tables, rows, 0))
}

/// Outcome of the point count check for one `(w̃, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCountCase {
    pub element: String,
    pub x: String,
    pub count: QPoly,
    pub dim: Dim,
    pub nonnegative: bool,
    pub zero_iff_empty: bool,
    pub degree_matches: bool,
}

/// Superbasic `x` among the length-zero elements.
pub fn superbasic_elements(a: &Adlv) -> Result<Vec<ExtAffElt>> {
    let tg = a.twisted_group();
    let mut out = Vec::new();
    for tau in tg.group().omega() {
        if tg.is_superstraight_class(tau)? && tg.newton_point(tau).is_zero() && !tau.is_identity() {
            out.push(tau.clone());
        }
    }
    Ok(out)
}

pub fn point_count_cases(a: &Adlv, opts: &SweepOptions) -> Result<Vec<PointCountCase>> {
    let tg = a.twisted_group();
    let xs = superbasic_elements(a)?;
    let ws = elements(a, opts.max_length);
    let mut jobs = Vec::new();
    for x in &xs {
        for w in ws.iter().filter(|w| tg.kottwitz_class(w) == tg.kottwitz_class(x)) {
            jobs.push((w.clone(), x.clone()));
        }
    }
    par::try_map(opts.exec, &jobs, |(w, x)| {
        let count = a.point_count_superbasic_a(w, x)?;
        let b = a.b_from_rep(x)?;
        let dim = a.dim(w, &b)?.dim;
        let degree_matches = match (count.degree(), dim) {
            (None, Dim::Empty) => true,
            (Some(k), Dim::Value(v)) => Rational64::from_integer(k as i64) == v,
            _ => false,
        };
        Ok(PointCountCase {
            element: tg.literal(w),
            x: tg.literal(x),
            nonnegative: count.coeffs().iter().all(|&c| c >= 0),
            zero_iff_empty: count.is_zero() == dim.is_empty(),
            degree_matches,
            count,
            dim,
        })
    })
}

pub fn point_count(a: &Adlv, opts: &SweepOptions) -> Result<SweepReport> {
    let rows = point_count_cases(a, opts)?
        .into_iter()
        .map(|c| {
            let ok = c.nonnegative && c.zero_iff_empty && c.degree_matches;
            row(c.element, &c.x, &c.count, c.dim, ok)
        })
        .collect();
    Ok(SweepReport::from_rows(Check::PointCount, rows, 0))
}
