//! Three-valued verdicts on the birationality of `phi_m` for a general
//! weighted hypersurface, from the monomials of degree `m w`.
//!
//! * A variable absent from every section makes `phi_m` factor through the
//!   projection forgetting it, of degree `e_j` on `X`.
//! * With every variable present, the monomial map on the torus has degree
//!   `[K : L]`, `K = ker(a)` and `L` the lattice of exponent differences.
//!   On `X` the degree is the order of the subgroup of the fibre group that
//!   preserves the general equation, `[K : L + L_d]`, where `L_d` is
//!   spanned by differences of degree-`d` monomials.

use crate::bounds::closed_form_r;
use crate::error::Result;
use crate::lattice::Lattice;
use crate::rational::{gcd_all, Rational};
use crate::singularities::{singular_strata, QuotientSingularity, SingularityClass, StratumFlag};
use crate::wspace::{enumerate_monomials, DegreeSlice, Hypersurface, WeightClasses, WeightVector};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub degree: u64,
    pub exponents: Vec<Vec<u64>>,
}

pub fn monomial_basis(h: &Hypersurface, m: u64) -> Result<MonomialMap> {
    let w = h.positive_amplitude()?;
    let degree = m * w;
    Ok(MonomialMap { degree, exponents: enumerate_monomials(h.weights(), degree) })
}

fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().unwrap_or(u64::MAX)
}

/// `[K : L]` for `L` spanned by differences of the exponent vectors and
/// `K = {e : sum a_i e_i = 0}`; `0` when `L` has smaller rank.
pub fn torus_separation_index(map: &MonomialMap, weights: &WeightVector) -> u64 {
    let nvars = weights.len();
    let mut l = Lattice::new(nvars);
    if let Some((first, rest)) = map.exponents.split_first() {
        for e in rest {
            l.insert(e.iter().zip(first).map(|(&a, &b)| BigInt::from(a) - BigInt::from(b)).collect());
        }
    }
    to_u64(&l.index_in_saturated(nvars - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    NonBirational,
    Unknown,
    Birational,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Birational => "birational",
            Status::NonBirational => "non-birational",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `x_j` is absent and the projection forgetting it has degree
    /// `equation_degree` on `X`.
    MissingVariable { variable: usize, weight: u64, equation_degree: u64, excluded_at_point: bool },
    /// Torus degrees of the ambient map and of its restriction to `X`.
    SeparationIndex { ambient_index: u64, restricted_index: u64, all_covered: bool },
    /// `x_j` is absent but linear in the equation; `X` is birational to the
    /// ambient space of the other variables, where the map has this degree.
    Eliminated { variable: usize, weight: u64, reduced_index: u64 },
    /// The image has dimension `rank < dim`.
    ImageDimension { rank: usize, dim: usize },
    /// `m` is at least the optimal stability index for this dimension and
    /// canonical dimension.
    StabilityBound { canonical_dimension: usize, bound: u64 },
    Insufficient { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Evidence,
}

impl Verdict {
    fn new(status: Status, evidence: Evidence) -> Self {
        Verdict { status, evidence }
    }

    fn unknown(reason: &str) -> Self {
        Verdict::new(Status::Unknown, Evidence::Insufficient { reason: reason.into() })
    }

    pub fn describe(&self) -> String {
        match &self.evidence {
            Evidence::MissingVariable { variable, weight, equation_degree, excluded_at_point } => format!(
                "x{variable} (weight {weight}) missing{}, degree {equation_degree}",
                if *excluded_at_point { " from sections vanishing at its point" } else { "" }
            ),
            Evidence::SeparationIndex { ambient_index, restricted_index, all_covered } => format!(
                "torus index {ambient_index}, on X {restricted_index}{}",
                if *all_covered { "" } else { ", some variable not separated" }
            ),
            Evidence::Eliminated { variable, weight, reduced_index } => {
                format!("x{variable} (weight {weight}) eliminated, reduced index {reduced_index}")
            }
            Evidence::ImageDimension { rank, dim } => format!("image dimension {rank} < {dim}"),
            Evidence::StabilityBound { canonical_dimension, bound } => {
                format!("m >= {bound}, optimal bound for canonical dimension {canonical_dimension}")
            }
            Evidence::Insufficient { reason } => reason.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MissingVariable {
    pub variable: usize,
    pub weight: u64,
    pub equation_degree: u64,
    pub status: Status,
}

/// Variables absent from every monomial of degree `m w`, with the degree of
/// the projection forgetting each.
pub fn missing_variable_analysis(h: &Hypersurface, m: u64) -> Vec<MissingVariable> {
    let Ok(w) = h.positive_amplitude() else {
        return Vec::new();
    };
    let classes = h.ambient().classes();
    let slice = DegreeSlice::new(classes.clone(), m * w);
    let mut out = Vec::new();
    for (c, members) in classes.members.iter().enumerate() {
        if slice.present[c] {
            continue;
        }
        for &v in members {
            let e = h.equation_degree_in(v);
            let status = if e >= 2 && others_coprime(h.weights(), v) { Status::NonBirational } else { Status::Unknown };
            out.push(MissingVariable { variable: v, weight: h.weights()[v], equation_degree: e, status });
        }
    }
    out.sort_by_key(|x| x.variable);
    out
}

fn others_coprime(a: &[u64], skip: usize) -> bool {
    gcd_all(a.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x)) == 1
}

/// Which variety's pluricanonical systems the verdicts describe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionModel {
    /// `X` has canonical singularities; its sections are the monomials.
    Canonical,
    /// The minimal model is the weighted blowup of one non-canonical vertex
    /// `P_point`; sections of `mK_Y` vanish there.
    WeightedBlowup {
        point: usize,
        singularity: String,
        /// `1 - age`, the coefficient of `E` in `theta^* K_X - K_Y`.
        discrepancy: String,
        theory_bound: Option<u64>,
    },
    /// Non-canonical or undetermined singularities: only non-birationality
    /// is transported to the minimal model.
    Unsupported { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelVerdict {
    pub m: u64,
    pub degree: u64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityEstimate {
    pub r_lower: u64,
    pub r_upper: Option<u64>,
    pub levels: Vec<LevelVerdict>,
    pub model: SectionModel,
}

impl StabilityEstimate {
    pub fn verdict(&self, m: u64) -> Option<&Verdict> {
        self.levels.iter().find(|l| l.m == m).map(|l| &l.verdict)
    }

    pub fn exact(&self) -> Option<u64> {
        (self.r_upper == Some(self.r_lower)).then_some(self.r_lower)
    }
}

struct Context<'a> {
    h: &'a Hypersurface,
    classes: WeightClasses,
    w: u64,
    equation_lattice: Lattice,
    equation_degrees: Vec<u64>,
    blowup: Option<(usize, Option<u64>)>,
    canonical: bool,
}

fn union(a: &Lattice, b: &Lattice) -> Lattice {
    let mut l = a.clone();
    for v in b.basis() {
        l.insert(v);
    }
    l
}

impl Context<'_> {
    fn level(&self, m: u64) -> Verdict {
        let d = self.h.degree();
        let big_d = m * self.w;
        let mut slice = DegreeSlice::new(self.classes.clone(), big_d);
        let mut excluded = None;
        if let Some((point, _)) = self.blowup {
            let c = self.classes.class_of(point);
            let only_powers = slice.monomials.iter().filter(|f| f[c] > 0).all(|f| {
                f.iter().enumerate().all(|(i, &e)| i == c || e == 0)
            });
            if big_d < d && slice.present[c] && only_powers {
                slice = slice.without_classes(&[c]);
                excluded = Some(point);
            }
        }
        let x_level = self.x_level(&slice, excluded);
        if x_level.status != Status::Birational {
            return x_level;
        }
        if self.canonical {
            return x_level;
        }
        match self.blowup {
            Some((_, Some(bound))) if m >= bound => Verdict::new(
                Status::Birational,
                Evidence::StabilityBound { canonical_dimension: self.h.dim() - 1, bound },
            ),
            _ => Verdict::unknown("birational on X; sections of the minimal model not certified"),
        }
    }

    fn x_level(&self, slice: &DegreeSlice, excluded: Option<usize>) -> Verdict {
        let a = self.h.weights();
        let s = self.classes.len();
        let missing: Vec<usize> = (0..s)
            .filter(|&c| !slice.present[c])
            .flat_map(|c| self.classes.members[c].iter().copied())
            .collect();
        if !missing.is_empty() {
            for &v in &missing {
                let e = self.equation_degrees[v];
                if e >= 2 && others_coprime(a, v) {
                    return Verdict::new(
                        Status::NonBirational,
                        Evidence::MissingVariable {
                            variable: v,
                            weight: a[v],
                            equation_degree: e,
                            excluded_at_point: excluded == Some(v),
                        },
                    );
                }
            }
            if missing.len() == 1 && self.equation_degrees[missing[0]] == 1 && others_coprime(a, missing[0]) {
                let v = missing[0];
                if s < 2 {
                    return Verdict::unknown("no variables left after elimination");
                }
                let lat = slice.compressed_lattice();
                let idx = lat.index_in_saturated(s - 2);
                let reduced_index = to_u64(&idx);
                let status = match reduced_index {
                    0 => {
                        return Verdict::new(
                            Status::NonBirational,
                            Evidence::ImageDimension { rank: slice.difference_rank(), dim: self.h.dim() },
                        )
                    }
                    1 => Status::Birational,
                    _ => Status::NonBirational,
                };
                return Verdict::new(status, Evidence::Eliminated { variable: v, weight: a[v], reduced_index });
            }
            return Verdict::unknown("missing variables with linear or no equation dependence");
        }
        let lat = slice.compressed_lattice();
        let ambient = lat.index_in_saturated(s - 1);
        if ambient == BigInt::from(0) {
            let rank = slice.difference_rank();
            if rank < self.h.dim() {
                return Verdict::new(Status::NonBirational, Evidence::ImageDimension { rank, dim: self.h.dim() });
            }
            return Verdict::unknown("positive-dimensional fibres on the ambient torus");
        }
        let restricted = union(&lat, &self.equation_lattice).index_in_saturated(s - 1);
        let all_covered = (0..s).all(|c| {
            self.classes.counts[c] >= 2
                || slice.monomials.iter().any(|f| f[c] != slice.monomials[0][c])
        });
        let (ambient_index, restricted_index) = (to_u64(&ambient), to_u64(&restricted));
        let evidence = Evidence::SeparationIndex { ambient_index, restricted_index, all_covered };
        if restricted.is_one() && all_covered {
            Verdict::new(Status::Birational, evidence)
        } else if restricted > BigInt::one() {
            Verdict::new(Status::NonBirational, evidence)
        } else {
            Verdict::new(Status::Unknown, evidence)
        }
    }
}

/// Chooses the section model from the singular strata.
pub fn section_model(h: &Hypersurface) -> SectionModel {
    let strata = singular_strata(h);
    if strata.iter().any(|s| s.meets_x() && s.flags.contains(&StratumFlag::Unsupported)) {
        return SectionModel::Unsupported { reason: "stratum without a transverse type".into() };
    }
    let bad: Vec<_> = strata.iter().filter(|s| s.verdict == Some(SingularityClass::NonCanonical)).collect();
    if bad.is_empty() {
        return SectionModel::Canonical;
    }
    let classes = h.ambient().classes();
    if let [s] = bad.as_slice() {
        let point = s.coordinates[0];
        let q: &QuotientSingularity = s.transverse.as_ref().expect("verdict implies a type");
        let age = q.age(1);
        if s.is_vertex() && classes.counts[classes.class_of(point)] == 1 && age < Rational::one() {
            let n = h.dim() as i64;
            let theory_bound = match h.canonical_image_dimension() {
                Ok(d1) if d1.value as i64 >= n - 1 => closed_form_r(n, n - 1).ok(),
                _ => None,
            };
            return SectionModel::WeightedBlowup {
                point,
                singularity: q.to_string(),
                discrepancy: crate::rational::to_canonical(&(Rational::one() - age)),
                theory_bound,
            };
        }
    }
    SectionModel::Unsupported { reason: "non-canonical singularities beyond a single weighted blowup".into() }
}

/// Verdicts for `m = 1..=m_max`; `r_lower` is one more than the largest
/// non-birational level and `r_upper` the start of the final run of
/// birational levels.
pub fn estimate_rs(h: &Hypersurface, m_max: u64) -> Result<StabilityEstimate> {
    let w = h.positive_amplitude()?;
    let classes = h.ambient().classes();
    let model = section_model(h);
    let blowup = match &model {
        SectionModel::WeightedBlowup { point, theory_bound, .. } => Some((*point, *theory_bound)),
        _ => None,
    };
    let ctx = Context {
        h,
        equation_lattice: DegreeSlice::new(classes.clone(), h.degree()).compressed_lattice(),
        equation_degrees: (0..h.weights().len()).map(|v| h.equation_degree_in(v)).collect(),
        classes,
        w,
        blowup,
        canonical: model == SectionModel::Canonical,
    };
    let levels: Vec<LevelVerdict> =
        (1..=m_max).map(|m| LevelVerdict { m, degree: m * w, verdict: ctx.level(m) }).collect();
    let r_lower = levels
        .iter()
        .filter(|l| l.verdict.status == Status::NonBirational)
        .map(|l| l.m + 1)
        .max()
        .unwrap_or(1);
    let tail = levels.iter().rev().take_while(|l| l.verdict.status == Status::Birational).count() as u64;
    let r_upper = (tail > 0).then(|| m_max - tail + 1);
    Ok(StabilityEstimate { r_lower, r_upper, levels, model })
}
