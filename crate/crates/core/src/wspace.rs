//! Weighted projective spaces `P(a_0, ..., a_{n+1})` and the general
//! hypersurface `X_d` of degree `d` in them.
//!
//! Monomial data is handled in two ways. Explicit exponent vectors are used
//! where the caller asks for them; everything that has to scale to families
//! with dozens of weight-one variables works on *weight classes*, where all
//! variables of the same weight are collapsed to one coordinate.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::rational::{gcd_all, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<u64>,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::InvalidWeights);
        }
        Ok(WeightVector { weights })
    }

    /// Builds a weight vector from `(weight, multiplicity)` pairs.
    pub fn from_powers(powers: &[(u64, usize)]) -> Result<Self> {
        let mut w = Vec::new();
        for &(a, count) in powers {
            w.extend(std::iter::repeat_n(a, count));
        }
        WeightVector::new(w)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Every sublist omitting one entry has gcd 1.
    pub fn is_well_formed(&self) -> bool {
        if self.len() == 1 {
            return self.weights[0] == 1;
        }
        (0..self.len()).all(|i| gcd_all(self.omit(&[i])) == 1)
    }

    fn omit<'a>(&'a self, skip: &'a [usize]) -> impl Iterator<Item = u64> + 'a {
        self.weights
            .iter()
            .enumerate()
            .filter(move |(i, _)| !skip.contains(i))
            .map(|(_, &a)| a)
    }

    pub fn classes(&self) -> WeightClasses {
        WeightClasses::new(&self.weights)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.classes();
        let parts: Vec<String> = c
            .weights
            .iter()
            .zip(&c.counts)
            .map(|(w, &n)| if n == 1 { w.to_string() } else { format!("{w}^{n}") })
            .collect();
        write!(f, "P({})", parts.join(","))
    }
}

/// Variables grouped by weight, in increasing weight order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightClasses {
    pub weights: Vec<u64>,
    pub counts: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl WeightClasses {
    pub fn new(weights: &[u64]) -> Self {
        let mut distinct: Vec<u64> = weights.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let members: Vec<Vec<usize>> = distinct
            .iter()
            .map(|&b| (0..weights.len()).filter(|&i| weights[i] == b).collect())
            .collect();
        let counts = members.iter().map(Vec::len).collect();
        WeightClasses { weights: distinct, counts, members }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn class_of(&self, var: usize) -> usize {
        self.members.iter().position(|m| m.contains(&var)).expect("variable index out of range")
    }
}

/// Whether `target` is a nonnegative integer combination of `gens`.
pub fn representable(gens: &[u64], target: u64) -> bool {
    if target == 0 {
        return true;
    }
    let t = target as usize;
    let mut reach = vec![false; t + 1];
    reach[0] = true;
    for &g in gens {
        let g = g as usize;
        if g == 0 || g > t {
            continue;
        }
        for s in g..=t {
            if reach[s - g] {
                reach[s] = true;
            }
        }
    }
    reach[t]
}

/// Number of exponent vectors `e >= 0` with `sum a_i e_i = m`.
///
/// Knapsack count over the variables: `O(m)` memory, `O(m * len)` time.
pub fn count_monomials(w: &WeightVector, m: u64) -> BigUint {
    let m = m as usize;
    let mut counts = vec![BigUint::zero(); m + 1];
    counts[0] = BigUint::from(1u32);
    for &a in w.weights() {
        let a = a as usize;
        if a > m {
            continue;
        }
        for s in a..=m {
            let (lo, hi) = counts.split_at_mut(s);
            hi[0] += &lo[s - a];
        }
    }
    counts.swap_remove(m)
}

/// All exponent vectors of weighted degree `degree`, in lexicographic order
/// of the exponent of the first variable (descending), then the next, ...
pub fn enumerate_monomials(weights: &[u64], degree: u64) -> Vec<Vec<u64>> {
    fn dfs(weights: &[u64], i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // prune: the tail must be able to absorb what is left
        if left > 0 && !representable(&weights[i..], left) {
            return;
        }
        let a = weights[i];
        let mut e = left / a;
        loop {
            cur.push(e);
            dfs(weights, i + 1, left - e * a, cur, out);
            cur.pop();
            if e == 0 {
                break;
            }
            e -= 1;
        }
    }
    let mut out = Vec::new();
    dfs(weights, 0, degree, &mut Vec::with_capacity(weights.len()), &mut out);
    out
}

/// Provenance flags attached to results that are only valid under
/// hypotheses the input may not satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    NotWellFormed,
    NotQuasiSmooth,
    NonGeneralType,
    NonCanonical,
    Heuristic,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flag::NotWellFormed => "not-well-formed",
            Flag::NotQuasiSmooth => "not-quasi-smooth",
            Flag::NonGeneralType => "non-general-type",
            Flag::NonCanonical => "non-canonical",
            Flag::Heuristic => "heuristic",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flagged<T> {
    pub value: T,
    pub flags: Vec<Flag>,
}

/// General member `X_d` of `|O(d)|` on a weighted projective space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypersurface {
    ambient: WeightVector,
    degree: u64,
}

impl Hypersurface {
    pub fn new(ambient: WeightVector, degree: u64) -> Result<Self> {
        if ambient.len() < 3 || degree == 0 {
            return Err(Error::InvalidHypersurface);
        }
        Ok(Hypersurface { ambient, degree })
    }

    pub fn from_weights(weights: &[u64], degree: u64) -> Result<Self> {
        Hypersurface::new(WeightVector::new(weights.to_vec())?, degree)
    }

    pub fn ambient(&self) -> &WeightVector {
        &self.ambient
    }

    pub fn weights(&self) -> &[u64] {
        self.ambient.weights()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.ambient.len() - 2
    }

    /// `w = d - sum a_i`; the general quasi-smooth member has `K_X = O_X(w)`.
    pub fn amplitude(&self) -> i64 {
        self.degree as i64 - self.ambient.sum() as i64
    }

    pub(crate) fn positive_amplitude(&self) -> Result<u64> {
        match self.amplitude() {
            w if w > 0 => Ok(w as u64),
            w => Err(Error::NonGeneralType(w)),
        }
    }

    /// `K^n = d w^n / prod a_i`.
    pub fn volume(&self) -> Result<Rational> {
        let w = self.positive_amplitude()?;
        let num = BigInt::from(self.degree) * BigInt::from(w).pow(self.dim() as u32);
        let den: BigInt = self.weights().iter().map(|&a| BigInt::from(a)).product();
        Ok(Rational::new(num, den))
    }

    /// `P_m = #monomials(m w) - #monomials(m w - d)`.
    pub fn plurigenus(&self, m: u64) -> Flagged<BigUint> {
        let mut flags = self.hypothesis_flags();
        let w = self.amplitude();
        if w <= 0 {
            flags.push(Flag::NonGeneralType);
            flags.sort();
            return Flagged { value: BigUint::zero(), flags };
        }
        let top = m * w as u64;
        let mut value = count_monomials(&self.ambient, top);
        if top >= self.degree {
            value -= count_monomials(&self.ambient, top - self.degree);
        }
        Flagged { value, flags }
    }

    pub fn geometric_genus(&self) -> Flagged<BigUint> {
        self.plurigenus(1)
    }

    fn hypothesis_flags(&self) -> Vec<Flag> {
        let mut flags = Vec::new();
        if !self.well_formed() {
            flags.push(Flag::NotWellFormed);
        }
        if !self.quasi_smooth() {
            flags.push(Flag::NotQuasiSmooth);
        }
        flags
    }

    /// Ambient space well-formed, and the gcd of any `n` of the weights
    /// (two omitted) divides `d`.
    pub fn well_formed(&self) -> bool {
        if !self.ambient.is_well_formed() {
            return false;
        }
        let n = self.ambient.len();
        for i in 0..n {
            for j in i + 1..n {
                let g = gcd_all(self.ambient.omit(&[i, j]));
                if g != 0 && !self.degree.is_multiple_of(g) {
                    return false;
                }
            }
        }
        true
    }

    /// Quasi-smoothness of the general member, evaluated per weight class.
    ///
    /// For a coordinate subset `I` the criterion only depends on which
    /// weights occur in `I` and on how many variables it uses; the hardest
    /// subset for a given set of weights takes every variable of those
    /// weights, so only `2^(#classes)` subsets need checking.
    pub fn quasi_smooth(&self) -> bool {
        let classes = self.ambient.classes();
        let s = classes.len();
        let d = self.degree;
        for mask in 1u64..(1u64 << s) {
            let inside: Vec<usize> = (0..s).filter(|c| mask >> c & 1 == 1).collect();
            let gens: Vec<u64> = inside.iter().map(|&c| classes.weights[c]).collect();
            if representable(&gens, d) {
                continue;
            }
            let need: usize = inside.iter().map(|&c| classes.counts[c]).sum();
            let have: usize = (0..s)
                .filter(|c| mask >> c & 1 == 0)
                .filter(|&c| classes.weights[c] <= d && representable(&gens, d - classes.weights[c]))
                .map(|c| classes.counts[c])
                .sum();
            if have < need {
                return false;
            }
        }
        true
    }

    /// Largest power of `x_j` occurring in the general equation.
    pub fn equation_degree_in(&self, var: usize) -> u64 {
        let a = self.weights()[var];
        let others: Vec<u64> = self
            .weights()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != var)
            .map(|(_, &b)| b)
            .collect();
        (0..=self.degree / a)
            .rev()
            .find(|&e| representable(&others, self.degree - e * a))
            .unwrap_or(0)
    }

    /// Dimension of the canonical image, from the rank of the lattice of
    /// exponent differences of degree-`w` monomials. Always flagged
    /// heuristic: a further drop in dimension on `X` is not detected.
    pub fn canonical_image_dimension(&self) -> Result<Flagged<usize>> {
        let w = self.positive_amplitude()?;
        let pg = self.geometric_genus();
        if pg.value.is_zero() {
            return Err(Error::NoSections);
        }
        let slice = DegreeSlice::new(self.ambient.classes(), w);
        let rank = slice.difference_rank();
        let mut flags = pg.flags;
        flags.push(Flag::Heuristic);
        flags.sort();
        Ok(Flagged { value: rank.min(self.dim()), flags })
    }
}

impl fmt::Display for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_{} in {}", self.degree, self.ambient)
    }
}

/// Quasi-smoothness criterion for an explicit monomial support, checked over
/// every coordinate subset. Exponential; meant for small cases and as an
/// independent check of [`Hypersurface::quasi_smooth`].
pub fn quasi_smooth_with_support(nvars: usize, support: &[Vec<u64>]) -> bool {
    assert!(nvars < 31);
    for mask in 1u32..(1u32 << nvars) {
        let in_i = |v: usize| mask >> v & 1 == 1;
        let inside_only = support
            .iter()
            .any(|e| e.iter().enumerate().all(|(v, &x)| x == 0 || in_i(v)));
        if inside_only {
            continue;
        }
        let mut outside = vec![false; nvars];
        for e in support {
            let out: Vec<usize> = (0..nvars).filter(|&v| !in_i(v) && e[v] > 0).collect();
            if out.len() == 1 && e[out[0]] == 1 {
                outside[out[0]] = true;
            }
        }
        let have = outside.iter().filter(|&&b| b).count();
        if have < mask.count_ones() as usize {
            return false;
        }
    }
    true
}

/// Monomials of one weighted degree, compressed to weight classes.
///
/// A class is *present* when some monomial of the degree involves one of
/// its variables. Differences of monomials generate a lattice `L` inside
/// `K = {e : sum a_i e_i = 0}`; when a class is present all swaps of two of
/// its variables lie in `L`, so `L` is recovered from the class-sum
/// coordinates plus those swaps.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    pub classes: WeightClasses,
    pub degree: u64,
    pub monomials: Vec<Vec<u64>>,
    pub present: Vec<bool>,
}

impl DegreeSlice {
    pub fn new(classes: WeightClasses, degree: u64) -> Self {
        let monomials = enumerate_monomials(&classes.weights, degree);
        let present = (0..classes.len())
            .map(|c| monomials.iter().any(|f| f[c] > 0))
            .collect();
        DegreeSlice { classes, degree, monomials, present }
    }

    /// Restricts attention to monomials not involving the given classes.
    pub fn without_classes(&self, excluded: &[usize]) -> Self {
        let monomials: Vec<Vec<u64>> = self
            .monomials
            .iter()
            .filter(|f| excluded.iter().all(|&c| f[c] == 0))
            .cloned()
            .collect();
        let present = (0..self.classes.len())
            .map(|c| monomials.iter().any(|f| f[c] > 0))
            .collect();
        DegreeSlice { classes: self.classes.clone(), degree: self.degree, monomials, present }
    }

    pub fn all_present(&self) -> bool {
        self.present.iter().all(|&p| p)
    }

    pub fn monomial_count(&self) -> BigUint {
        // each compressed monomial stands for a product of multisets
        let mut total = BigUint::zero();
        for f in &self.monomials {
            let mut term = BigUint::from(1u32);
            for (c, &e) in f.iter().enumerate() {
                term *= multiset_count(self.classes.counts[c], e);
            }
            total += term;
        }
        total
    }

    /// Lattice of differences in class-sum coordinates.
    pub fn compressed_lattice(&self) -> Lattice {
        let s = self.classes.len();
        let mut l = Lattice::new(s);
        if let Some((first, rest)) = self.monomials.split_first() {
            for f in rest {
                l.insert(f.iter().zip(first).map(|(&a, &b)| BigInt::from(a) - BigInt::from(b)).collect());
            }
        }
        l
    }

    /// Rank of the lattice of differences in full variable coordinates.
    pub fn difference_rank(&self) -> usize {
        let swaps: usize = (0..self.classes.len())
            .filter(|&c| self.present[c])
            .map(|c| self.classes.counts[c] - 1)
            .sum();
        swaps + self.compressed_lattice().rank()
    }
}

fn multiset_count(n: usize, e: u64) -> BigUint {
    // C(n + e - 1, e)
    if n == 0 {
        return if e == 0 { BigUint::from(1u32) } else { BigUint::zero() };
    }
    let mut r = BigUint::from(1u32);
    for i in 0..e {
        r = r * BigUint::from(n as u64 + i) / BigUint::from(i + 1);
    }
    r
}

pub fn biguint_to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}
