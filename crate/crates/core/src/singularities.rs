//! Cyclic quotient singularities of the general hypersurface: location on
//! the coordinate strata, Reid–Tai classification, and Hirzebruch–Jung
//! resolution of the surface case with exact discrepancies.

use crate::error::{Error, Result};
use crate::rational::{gcd_all, int, Rational};
use crate::wspace::{representable, Hypersurface};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// `1/r(w_1, ..., w_m)`, stored with each weight reduced mod `r` and the
/// weights sorted (the type does not depend on their order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientSingularity {
    order: u64,
    weights: Vec<u64>,
}

impl QuotientSingularity {
    pub fn new(order: u64, weights: &[u64]) -> Self {
        assert!(order >= 1, "order must be positive");
        let mut weights: Vec<u64> = weights.iter().map(|w| w % order).collect();
        weights.sort_unstable();
        QuotientSingularity { order, weights }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `sum_i {j w_i / r}` times `r`.
    fn scaled_age(&self, j: u64) -> u64 {
        self.weights.iter().map(|&w| (j * w) % self.order).sum()
    }

    pub fn age(&self, j: u64) -> Rational {
        Rational::new(self.scaled_age(j).into(), self.order.into())
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.weights.len() <= 4 {
            self.weights.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        } else {
            let mut parts = Vec::new();
            let mut i = 0;
            while i < self.weights.len() {
                let w = self.weights[i];
                let run = self.weights[i..].iter().take_while(|&&x| x == w).count();
                parts.push(if run == 1 { w.to_string() } else { format!("{w}^{run}") });
                i += run;
            }
            parts.join(",")
        };
        write!(f, "1/{}({})", self.order, body)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SingularityClass {
    Terminal,
    Canonical,
    NonCanonical,
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityClass::Terminal => "terminal",
            SingularityClass::Canonical => "canonical",
            SingularityClass::NonCanonical => "non-canonical",
        })
    }
}

/// Reid–Tai: terminal iff every age exceeds 1, canonical iff every age is at
/// least 1.
pub fn reid_tai(q: &QuotientSingularity) -> SingularityClass {
    let r = q.order;
    let mut class = SingularityClass::Terminal;
    for j in 1..r {
        let a = q.scaled_age(j);
        if a < r {
            return SingularityClass::NonCanonical;
        }
        if a == r {
            class = SingularityClass::Canonical;
        }
    }
    class
}

/// `P/Q = b_1 - 1/(b_2 - 1/(...))` with every `b_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HJExpansion(pub Vec<i64>);

impl HJExpansion {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn evaluate(&self) -> Rational {
        let mut it = self.0.iter().rev();
        let Some(&last) = it.next() else {
            return Rational::zero();
        };
        let mut acc = int(last);
        for &b in it {
            acc = int(b) - acc.recip();
        }
        acc
    }
}

pub fn hj_expand(p: i64, q: i64) -> Result<HJExpansion> {
    if !(0 < q && q < p) || p.gcd(&q) != 1 {
        return Err(Error::InvalidFraction { p, q });
    }
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        let b = Integer::div_ceil(&p, &q);
        out.push(b);
        (p, q) = (q, b * q - p);
    }
    Ok(HJExpansion(out))
}

/// Minimal resolution of a surface cyclic quotient singularity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceResolution {
    pub singularity: QuotientSingularity,
    /// `1/P(1, Q)` normal form.
    pub normal_form: (i64, i64),
    pub expansion: HJExpansion,
    /// Self-intersections `-b_i` along the chain.
    pub chain: Vec<i64>,
    pub discrepancies: Vec<Rational>,
}

impl SurfaceResolution {
    pub fn is_crepant(&self) -> bool {
        self.discrepancies.iter().all(Zero::is_zero)
    }

    /// `(sum a_i E_i)^2` on the chain.
    pub fn correction(&self) -> Rational {
        let m = chain_matrix(&self.chain);
        quadratic_form(&m, &self.discrepancies)
    }
}

fn chain_matrix(chain: &[i64]) -> Vec<Vec<i64>> {
    let n = chain.len();
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        m[i][i] = chain[i];
        if i + 1 < n {
            m[i][i + 1] = 1;
            m[i + 1][i] = 1;
        }
    }
    m
}

fn quadratic_form(m: &[Vec<i64>], a: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, &mij) in row.iter().enumerate() {
            if mij != 0 {
                s += &a[i] * &a[j] * int(mij);
            }
        }
    }
    s
}

/// Resolves `1/r(w_1, w_2)` via the Hirzebruch–Jung chain of `r/Q`, where
/// the type is rewritten as `1/r(1, Q)` with `Q = w_2 / w_1 mod r`.
pub fn resolve_surface_cyclic(q: &QuotientSingularity) -> Result<SurfaceResolution> {
    if q.dim() != 2 {
        return Err(Error::NotSurfaceType(q.dim()));
    }
    let r = q.order as i64;
    let (w1, w2) = (q.weights[0] as i64, q.weights[1] as i64);
    if w1.gcd(&r) != 1 || w2.gcd(&r) != 1 {
        return Err(Error::NotIsolated { r: q.order, weights: q.weights.clone() });
    }
    if r == 1 {
        return Ok(SurfaceResolution {
            singularity: q.clone(),
            normal_form: (1, 0),
            expansion: HJExpansion(Vec::new()),
            chain: Vec::new(),
            discrepancies: Vec::new(),
        });
    }
    let inv = mod_inverse(w1, r);
    let qn = (w2 * inv).rem_euclid(r);
    let expansion = if qn == 1 && r == 1 { HJExpansion(vec![]) } else { hj_expand(r, qn)? };
    let chain: Vec<i64> = expansion.0.iter().map(|b| -b).collect();
    let discrepancies = solve_chain_adjunction(&chain);
    Ok(SurfaceResolution { singularity: q.clone(), normal_form: (r, qn), expansion, chain, discrepancies })
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// Solves `sum_j a_j E_j.E_i = -E_i^2 - 2` on a chain of rational curves by
/// forward elimination and back substitution on the tridiagonal matrix.
pub fn solve_chain_adjunction(chain: &[i64]) -> Vec<Rational> {
    let n = chain.len();
    if n == 0 {
        return Vec::new();
    }
    let rhs: Vec<Rational> = chain.iter().map(|&s| int(-s - 2)).collect();
    let mut diag: Vec<Rational> = chain.iter().map(|&s| int(s)).collect();
    let mut b = rhs;
    // off-diagonals are 1
    for i in 1..n {
        let factor = diag[i - 1].recip();
        diag[i] = &diag[i] - &factor;
        b[i] = &b[i] - &factor * &b[i - 1];
    }
    let mut a = vec![Rational::zero(); n];
    a[n - 1] = &b[n - 1] / &diag[n - 1];
    for i in (0..n - 1).rev() {
        a[i] = (&b[i] - &a[i + 1]) / &diag[i];
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumFlag {
    /// The point-count formula is not an integer, or `X` passes through a
    /// coordinate point of the stratum.
    NonTransverse,
    /// No transverse type could be extracted; partial data only.
    Unsupported,
}

/// One singular stratum `P_J = {x_i = 0 for i not in J}` of the ambient
/// space and how the general `X` meets it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    pub coordinates: Vec<usize>,
    pub weights: Vec<u64>,
    /// Generic isotropy order `gcd(a_J)`.
    pub order: u64,
    pub stratum_dim: usize,
    /// `None` when `X` misses the stratum.
    pub intersection_dim: Option<usize>,
    /// Weighted point count `d r / (a_p a_q)` of a 0-dimensional
    /// intersection with a 1-dimensional stratum, or 1 for a vertex on `X`.
    pub point_count: Option<Rational>,
    /// Points of a 1-dimensional stratum with both coordinates nonzero.
    pub interior_points: Option<u64>,
    pub eliminated: Option<usize>,
    pub transverse: Option<QuotientSingularity>,
    pub verdict: Option<SingularityClass>,
    pub flags: Vec<StratumFlag>,
}

impl StratumReport {
    pub fn meets_x(&self) -> bool {
        self.intersection_dim.is_some()
    }

    pub fn is_vertex(&self) -> bool {
        self.coordinates.len() == 1
    }
}

/// Coordinate strata with nontrivial generic isotropy, ordered by size and
/// then by coordinates.
pub fn singular_strata(h: &Hypersurface) -> Vec<StratumReport> {
    let a = h.weights();
    let nvars = a.len();
    let max = *a.iter().max().unwrap();
    let mut subsets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for r in 2..=max {
        let j: Vec<usize> = (0..nvars).filter(|&i| a[i].is_multiple_of(r)).collect();
        if !j.is_empty() && j.len() < nvars {
            subsets.insert(j);
        }
    }
    let mut subsets: Vec<Vec<usize>> = subsets.into_iter().collect();
    subsets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    subsets.into_iter().map(|j| stratum_report(h, j)).collect()
}

fn stratum_report(h: &Hypersurface, coords: Vec<usize>) -> StratumReport {
    let a = h.weights();
    let d = h.degree();
    let nvars = a.len();
    let wj: Vec<u64> = coords.iter().map(|&i| a[i]).collect();
    let order = gcd_all(wj.iter().copied());
    let outside: Vec<usize> = (0..nvars).filter(|i| !coords.contains(i)).collect();
    let mut report = StratumReport {
        coordinates: coords.clone(),
        weights: wj.clone(),
        order,
        stratum_dim: coords.len() - 1,
        intersection_dim: None,
        point_count: None,
        interior_points: None,
        eliminated: None,
        transverse: None,
        verdict: None,
        flags: Vec::new(),
    };
    let restricted = representable(&wj, d);
    if restricted {
        if coords.len() == 1 {
            return report;
        }
        report.intersection_dim = Some(coords.len() - 2);
        let tw: Vec<u64> = outside.iter().map(|&i| a[i]).collect();
        report.transverse = Some(QuotientSingularity::new(order, &tw));
        if coords.len() == 2 {
            let (ap, aq) = (wj[0], wj[1]);
            let count = Rational::new((d * order).into(), (ap * aq).into());
            let exps: Vec<(u64, u64)> =
                (0..=d / ap).filter(|i| (d - i * ap).is_multiple_of(aq)).map(|i| (i, (d - i * ap) / aq)).collect();
            let i_min = exps.iter().map(|e| e.0).min().unwrap();
            let j_min = exps.iter().map(|e| e.1).min().unwrap();
            report.interior_points = Some(exps.len() as u64 - 1);
            if !count.is_integer() || i_min > 0 || j_min > 0 {
                report.flags.push(StratumFlag::NonTransverse);
            }
            report.point_count = Some(count);
        }
    } else {
        report.intersection_dim = Some(coords.len() - 1);
        if coords.len() == 1 {
            report.point_count = Some(Rational::one());
        }
        // eliminate the first x_j with x_J^m x_j of degree d
        let elim = outside.iter().copied().find(|&j| a[j] <= d && representable(&wj, d - a[j]));
        match elim {
            Some(j) => {
                report.eliminated = Some(j);
                let tw: Vec<u64> = outside.iter().filter(|&&i| i != j).map(|&i| a[i]).collect();
                report.transverse = Some(QuotientSingularity::new(order, &tw));
            }
            None => report.flags.push(StratumFlag::Unsupported),
        }
    }
    report.verdict = report.transverse.as_ref().map(reid_tai);
    report
}

/// Worst Reid–Tai class among strata meeting `X` (`Terminal` if smooth).
pub fn worst_singularity(strata: &[StratumReport]) -> SingularityClass {
    strata
        .iter()
        .filter_map(|s| s.verdict)
        .max()
        .unwrap_or(SingularityClass::Terminal)
}

pub fn is_nonpositive_all(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_positive())
}
