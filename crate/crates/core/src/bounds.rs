//! Lower bounds for `xi` and the volume, and upper bounds for the canonical
//! stability index, from the two inequalities
//!
//! * `xi >= (2g - 2) / (1 + sigma)`,
//! * `m xi >= 2g - 2 + ceil(alpha_m)` whenever `alpha_m > 1`, with
//!   `alpha_m >= (m - 1 - sigma) xi`,
//!
//! plus `K^n >= beta_2 ... beta_n xi` and birationality of `phi_m` once
//! `alpha_m > 2`.
//!
//! The step map `T(x) = max_m (2g - 2 + ceil((m - 1 - sigma) x)) / m` is a
//! nondecreasing step function. If `T(x) > x` then `x` cannot be the true
//! `xi`, so every certified bound is the least point `b` above the seed
//! with `T(b) <= b`, taken over all `m`. The greedy iteration finds it over
//! a finite window; when `b` is only a supremum of window fixed points it
//! is certified by [`certify_exclusion`].

use crate::error::{Error, Result};
use crate::rational::{ceil, floor, int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundProblem {
    pub n: u64,
    pub genus: u64,
    pub sigma: Rational,
    pub beta_product: Rational,
    pub xi: Rational,
}

impl BoundProblem {
    pub fn new(n: u64, genus: u64, sigma: Rational, beta_product: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n as i64));
        }
        if genus < 2 || sigma.is_negative() || !beta_product.is_positive() {
            return Err(Error::InvalidConfig("need genus >= 2, sigma >= 0, beta product > 0".into()));
        }
        let mut p = BoundProblem { n, genus, sigma, beta_product, xi: Rational::zero() };
        p.xi = ine2_seed(&p);
        Ok(p)
    }

    /// Canonical dimension `n - 1`: `g = 2`, every `beta_i = 1`.
    pub fn corank_one(n: u64) -> Result<Self> {
        BoundProblem::new(n, 2, int(n as i64 - 1), Rational::one())
    }

    /// Canonical dimension `n`: `sigma = n - 1` and `xi >= 2`.
    pub fn full_dimension(n: u64) -> Result<Self> {
        Ok(BoundProblem::corank_one(n)?.with_xi(int(2)))
    }

    pub fn with_xi(&self, xi: Rational) -> Self {
        BoundProblem { xi, ..self.clone() }
    }

    fn h(&self) -> Rational {
        int(2 * self.genus as i64 - 2)
    }

    fn s(&self) -> Rational {
        &self.sigma + Rational::one()
    }

    /// Smallest `m` with `m - 1 - sigma > 0`.
    pub fn first_m(&self) -> u64 {
        (ceil(&self.sigma) + BigInt::from(2)).to_u64().unwrap_or(2)
    }

    /// Least `x` with `T(x) <= x` for every `m`.
    pub fn upper_scan_limit(&self) -> Rational {
        (self.h() + Rational::one()) / self.s()
    }

    /// `(m - 1 - sigma) xi`, the certified lower bound for `alpha_m`.
    pub fn alpha_lower(&self, m: u64) -> Rational {
        (int(m as i64) - self.s()) * &self.xi
    }
}

fn ine1_value(p: &BoundProblem, x: &Rational, m: u64) -> Option<Rational> {
    let alpha = (int(m as i64) - p.s()) * x;
    if alpha <= Rational::one() {
        return None;
    }
    Some((p.h() + Rational::from_integer(ceil(&alpha))) / int(m as i64))
}

pub fn ine2_seed(p: &BoundProblem) -> Rational {
    p.h() / p.s()
}

/// Bound from one application of Ine1 at `m` with `alpha_m` bounded below
/// by `(m - 1 - sigma) p.xi`; never below `p.xi`.
pub fn ine1_step(p: &BoundProblem, m: u64) -> Result<Rational> {
    let v = ine1_value(p, &p.xi, m).ok_or_else(|| Error::PreconditionNotCertified {
        m,
        alpha: crate::rational::to_canonical(&p.alpha_lower(m)),
    })?;
    Ok(v.max(p.xi.clone()))
}

/// Raw Ine1 value without the `max` with `p.xi`.
pub fn ine1_raw(p: &BoundProblem, m: u64) -> Option<Rational> {
    ine1_value(p, &p.xi, m)
}

fn best_step(p: &BoundProblem, x: &Rational, m_lo: u64, m_hi: u64) -> Option<(Rational, u64)> {
    let mut best: Option<(Rational, u64)> = None;
    for m in m_lo..=m_hi {
        if let Some(v) = ine1_value(p, x, m) {
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, m));
            }
        }
    }
    best
}

/// Least `b >= from` with `T(b) <= b` for `T` over `m` in `[first_m, m_hi]`.
/// Jumping from `x` to `T(x)` is exact because `T` is nondecreasing, so
/// `T > id` on all of `[x, T(x))`.
pub fn window_closure(p: &BoundProblem, from: &Rational, m_hi: u64) -> Rational {
    let m_lo = p.first_m();
    let mut x = from.clone();
    while let Some((v, _)) = best_step(p, &x, m_lo, m_hi) {
        if v <= x {
            break;
        }
        x = v;
    }
    x
}

/// Whether `T(c) <= c` for every admissible `m`, not just a window. The
/// condition depends on `m` only through `m mod denom(c)`.
pub fn is_fixed_for_all_m(p: &BoundProblem, c: &Rational) -> bool {
    if !c.is_positive() {
        return false;
    }
    let s = p.s();
    let delta = &s * c - p.h();
    if delta.is_negative() {
        return false;
    }
    if delta >= Rational::one() {
        return true;
    }
    let q = c.denom().to_u64().expect("denominator fits in u64");
    let start = floor(&(&s + c.recip())) + BigInt::one();
    let start = start.to_u64().unwrap_or(1).max(1);
    (start..start + q).all(|m| {
        let y = (int(m as i64) - &s) * c;
        Rational::from_integer(ceil(&y)) - &y <= delta
    })
}

/// How a half-open interval `[from, to)` was shown to contain no value of
/// the true `xi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExclusionCertificate {
    /// `T > id` on the interval with `m <= m_max`.
    Window { m_max: u64 },
    /// `T > id` on `[from, to - epsilon]` with `m <= m_max`, and on
    /// `[to - epsilon, to)` by the family of `m` with `(m-1-sigma) to`
    /// integral.
    Limit { epsilon: String, m_max: u64 },
}

/// An `epsilon > 0` with `T(x) > x` for all `x` in `[c - epsilon, c)`.
///
/// For `x = c - e` and `m` with `y = (m - 1 - sigma) c` an integer and
/// `delta/e < m < 1 + sigma + 1/e`, where `delta = (1 + sigma) c - (2g-2)`,
/// one gets `ceil((m-1-sigma) x) = y > m x - (2g - 2)`. Such an `m` exists
/// once the interval is longer than the largest gap between admissible
/// residues.
pub fn left_neighbourhood(p: &BoundProblem, c: &Rational) -> Option<Rational> {
    let s = p.s();
    let delta = &s * c - p.h();
    if !delta.is_positive() || delta > Rational::one() {
        return None;
    }
    let q = c.denom().to_u64()?;
    let admissible: Vec<u64> = (0..q).filter(|&m| ((int(m as i64) - &s) * c).is_integer()).collect();
    if admissible.is_empty() {
        return None;
    }
    let mut gap = q - admissible.last().unwrap() + admissible[0];
    for w in admissible.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    let gap = int(gap as i64);
    let one = Rational::one();
    let mut eps = c / int(2);
    if delta == one {
        if s <= gap {
            return None;
        }
    } else if s <= gap {
        eps = eps.min((&one - &delta) / (int(2) * (&gap - &s)));
    }
    for _ in 0..512 {
        // (m-1-sigma) x > 1 for every m above delta/eps
        if (&delta / &eps - &s) * (c - &eps) >= one {
            return Some(eps);
        }
        eps /= int(2);
    }
    None
}

fn window_schedule(p: &BoundProblem) -> Vec<u64> {
    let base = p.first_m() + 4 * p.n + 16;
    (0..5).map(|j| base << (2 * j)).collect()
}

/// Proves `[from, to)` contains no value of the true `xi`.
pub fn certify_exclusion(p: &BoundProblem, from: &Rational, to: &Rational) -> Option<ExclusionCertificate> {
    if from >= to {
        return Some(ExclusionCertificate::Window { m_max: p.first_m() });
    }
    let windows = window_schedule(p);
    if is_fixed_for_all_m(p, to) {
        // no window can pass `to`, only reach it
        let eps = left_neighbourhood(p, to)?;
        let target = to - &eps;
        for &hi in &windows {
            let b = window_closure(p, from, hi);
            if b >= *to {
                return Some(ExclusionCertificate::Window { m_max: hi });
            }
            if b >= target {
                return Some(ExclusionCertificate::Limit { epsilon: crate::rational::to_canonical(&eps), m_max: hi });
            }
        }
        return None;
    }
    windows.into_iter().find(|&hi| window_closure(p, from, hi) >= *to).map(|m_max| ExclusionCertificate::Window { m_max })
}

/// Least value `>= from` that is a fixed point for every `m`, with its
/// certificate, or `None` if no candidate could be certified.
pub fn certified_supremum(p: &BoundProblem, from: &Rational) -> Option<(Rational, ExclusionCertificate)> {
    let windows = window_schedule(p);
    let b = window_closure(p, from, windows[0]);
    if is_fixed_for_all_m(p, &b) {
        return Some((b, ExclusionCertificate::Window { m_max: windows[0] }));
    }
    let u = p.upper_scan_limit();
    let qmax = 4 * (p.n + 2);
    let mut cands: Vec<Rational> = vec![u.clone()];
    for q in 1..=qmax {
        let qq = BigInt::from(q);
        let lo = floor(&(&b * int(q as i64))) + BigInt::one();
        let hi = floor(&(&u * int(q as i64)));
        let mut num = lo;
        while num <= hi {
            let c = Rational::new(num.clone(), qq.clone());
            if c.denom() == &qq && is_fixed_for_all_m(p, &c) {
                cands.push(c);
            }
            num += 1;
        }
    }
    cands.sort();
    cands.dedup();
    for c in cands.into_iter().take(8) {
        if let Some(cert) = certify_exclusion(p, &b, &c) {
            return Some((c, cert));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    Ine1 { m: u64 },
    Limit { certificate: Option<ExclusionCertificate> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: StepRule,
    pub xi_before: Rational,
    pub xi_after: Rational,
    /// What the inequality actually yields; `>= xi_after` when verified.
    pub certified: Option<Rational>,
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The greedy iteration stopped on a fixed point valid for every `m`.
    FixedPoint,
    /// A final limit step certified the supremum of window fixed points.
    Limit,
    /// Best window bound only; the supremum could not be certified.
    Unconverged,
    /// A replayed schedule.
    Schedule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTrace {
    pub n: u64,
    pub steps: Vec<TraceStep>,
    pub final_xi: Rational,
    pub rs_upper: u64,
    pub volume_bound: Rational,
    pub termination: Termination,
}

impl BoundTrace {
    pub fn verified(&self) -> bool {
        self.steps.iter().all(|s| s.verified)
    }

    pub fn displayed(&self) -> Vec<Rational> {
        self.steps.iter().map(|s| s.xi_after.clone()).collect()
    }

    fn finish(p: &BoundProblem, steps: Vec<TraceStep>, final_xi: Rational, termination: Termination) -> Self {
        let q = p.with_xi(final_xi.clone());
        BoundTrace {
            n: p.n,
            rs_upper: rs_upper_bound(&q),
            volume_bound: volume_bound(&q),
            steps,
            final_xi,
            termination,
        }
    }
}

/// Greedy Ine1 search over `m` in `[first_m, first_m + m_window]`, then a
/// closure step to the certified supremum. Ties go to the smallest `m`.
pub fn optimize_xi(p: &BoundProblem, m_window: u64, max_rounds: usize) -> BoundTrace {
    let m_lo = p.first_m();
    let m_hi = m_lo + m_window.max(1);
    let mut xi = p.xi.clone();
    let mut steps = Vec::new();
    for _ in 0..max_rounds {
        match best_step(p, &xi, m_lo, m_hi) {
            Some((v, m)) if v > xi => {
                steps.push(TraceStep {
                    rule: StepRule::Ine1 { m },
                    xi_before: xi.clone(),
                    xi_after: v.clone(),
                    certified: Some(v.clone()),
                    verified: true,
                });
                xi = v;
            }
            _ => break,
        }
    }
    if is_fixed_for_all_m(p, &xi) {
        return BoundTrace::finish(p, steps, xi, Termination::FixedPoint);
    }
    match certified_supremum(p, &xi) {
        Some((c, cert)) => {
            steps.push(TraceStep {
                rule: StepRule::Limit { certificate: Some(cert) },
                xi_before: xi,
                xi_after: c.clone(),
                certified: Some(c.clone()),
                verified: true,
            });
            BoundTrace::finish(p, steps, c, Termination::Limit)
        }
        None => BoundTrace::finish(p, steps, xi, Termination::Unconverged),
    }
}

/// Geometric steps `l = 1..=GEOMETRIC_STEPS` replayed before each limit.
pub const GEOMETRIC_STEPS: u32 = 3;
/// Last `t` of the `1/(k + 1/t)` tail for `n = 3k`.
pub const TAIL_END: i64 = 8;

struct ScheduleBuilder<'a> {
    p: &'a BoundProblem,
    steps: Vec<TraceStep>,
    current: Rational,
}

impl ScheduleBuilder<'_> {
    /// Ine1 at `m` from the hypothesis `from`, claiming `shown`.
    fn step(&mut self, from: Rational, m: u64, shown: Rational) {
        if shown <= from {
            return;
        }
        let raw = ine1_raw(&self.p.with_xi(from.clone()), m);
        let verified = from <= self.current && raw.as_ref().is_some_and(|v| *v >= shown);
        self.steps.push(TraceStep {
            rule: StepRule::Ine1 { m },
            xi_before: from,
            xi_after: shown.clone(),
            certified: raw,
            verified,
        });
        self.current = self.current.clone().max(shown);
    }

    fn limit(&mut self, from: Rational, to: Rational) {
        if to <= from {
            return;
        }
        let cert = certify_exclusion(self.p, &from, &to);
        let verified = from <= self.current && cert.is_some();
        self.steps.push(TraceStep {
            rule: StepRule::Limit { certificate: cert },
            xi_before: from,
            xi_after: to.clone(),
            certified: verified.then(|| to.clone()),
            verified,
        });
        self.current = self.current.clone().max(to);
    }
}

fn floor_div(a: i64, b: i64) -> u64 {
    Integer::div_floor(&a, &b) as u64
}

/// Replays the hand-chosen sequences of `m` for the three residues of `n`
/// mod 3, recording each displayed bound and the value Ine1 certifies.
pub fn paper_schedule(n: u64) -> Result<BoundTrace> {
    let p = BoundProblem::corank_one(n)?;
    let k = (n / 3) as i64;
    let mut b = ScheduleBuilder { p: &p, steps: Vec::new(), current: p.xi.clone() };
    let seed = p.xi.clone();
    let pow4 = |l: u32| 4i64.pow(l);
    let final_xi;
    match n % 3 {
        2 => {
            let f = |l: u32| Rational::new((2 * pow4(l)).into(), ((2 * pow4(l) + 1) * k + 2 * pow4(l)).into());
            b.step(seed, floor_div(9 * k + 8, 2), f(1));
            for l in 1..GEOMETRIC_STEPS {
                let m = floor_div((2 * pow4(l) + 1) * k, 2 * pow4(l)) + (3 * k + 4) as u64;
                b.step(f(l), m, f(l + 1));
            }
            final_xi = Rational::new(1.into(), (k + 1).into());
            b.limit(f(GEOMETRIC_STEPS), final_xi.clone());
        }
        1 => {
            let tail = |l: u32| (4 * pow4(l) - 1) / 3;
            let f = |l: u32| Rational::new((2 * pow4(l)).into(), ((2 * pow4(l) + 1) * k + tail(l)).into());
            b.step(seed, floor_div(9 * k + 1 + 4, 2), f(1));
            for l in 1..GEOMETRIC_STEPS {
                let m = floor_div((2 * pow4(l) + 1) * k + tail(l), 2 * pow4(l)) + (3 * k + 2) as u64;
                b.step(f(l), m, f(l + 1));
            }
            let lim = Rational::new(3.into(), (3 * k + 2).into());
            b.limit(f(GEOMETRIC_STEPS), lim.clone());
            final_xi = Rational::new(2.into(), (2 * k + 1).into());
            b.step(lim, (4 * k + 2) as u64, final_xi.clone());
        }
        _ => {
            let tail = |l: u32| (4 * pow4(l) - 4) / 3;
            let g = |l: u32| Rational::new((2 * pow4(l)).into(), ((2 * pow4(l) + 1) * k + tail(l)).into());
            b.step(seed, floor_div(9 * k + 2, 2), Rational::new(8.into(), (9 * k + 2).into()));
            for l in 1..GEOMETRIC_STEPS {
                let m = floor_div((2 * pow4(l) + 1) * k + tail(l), 2 * pow4(l)) + (3 * k + 2) as u64;
                b.step(g(l), m, g(l + 1));
            }
            let lim = Rational::new(3.into(), (3 * k + 2).into());
            b.limit(g(GEOMETRIC_STEPS), lim.clone());
            let x = |t: i64| Rational::new(t.into(), (t * k + 1).into());
            b.step(lim, (4 * k + 1) as u64, x(4));
            for t in 4..TAIL_END {
                b.step(x(t), ((t + 1) * k + 1) as u64, x(t + 1));
            }
            final_xi = Rational::new(1.into(), k.into());
            b.limit(x(TAIL_END), final_xi.clone());
        }
    }
    let final_xi = final_xi.max(p.xi.clone());
    Ok(BoundTrace::finish(&p, b.steps, final_xi, Termination::Schedule))
}

/// Least `m > n` with `(m - 1 - sigma) xi > 2`.
pub fn rs_upper_bound(p: &BoundProblem) -> u64 {
    let t = p.s() + int(2) / &p.xi;
    let m0 = (floor(&t) + BigInt::one()).to_u64().expect("threshold fits in u64");
    m0.max(p.n + 1)
}

pub fn volume_bound(p: &BoundProblem) -> Rational {
    &p.beta_product * &p.xi
}

fn check_closed_form(n: i64, d1: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if d1 != n && d1 != n - 1 {
        return Err(Error::InvalidDimension(d1));
    }
    Ok(())
}

/// Optimal volume for canonical dimension `d1` in `{n, n - 1}`.
pub fn closed_form_v(n: i64, d1: i64) -> Result<Rational> {
    check_closed_form(n, d1)?;
    Ok(if d1 == n { int(2) } else { Rational::new(6.into(), (2 * n + n % 3).into()) })
}

/// Optimal stability index for canonical dimension `d1` in `{n, n - 1}`.
pub fn closed_form_r(n: i64, d1: i64) -> Result<u64> {
    check_closed_form(n, d1)?;
    Ok(if d1 == n { (n + 2) as u64 } else { ((5 * n + 3 + n % 3) / 3) as u64 })
}

pub const DEFAULT_WINDOW: u64 = 50;
pub const DEFAULT_ROUNDS: usize = 64;
