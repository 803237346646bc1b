//! Integer lattices given by generators: Hermite-style incremental basis,
//! Smith invariant factors, rank, and index inside a saturated lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Sublattice of `Z^dim` kept as an echelon basis indexed by pivot column.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    rows: BTreeMap<usize, Vec<BigInt>>,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, rows: BTreeMap::new() }
    }

    pub fn from_generators<I, V>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[i64]>,
    {
        let mut l = Lattice::new(dim);
        for g in gens {
            l.insert_i64(g.as_ref());
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows.values().cloned().collect()
    }

    pub fn insert_i64(&mut self, v: &[i64]) {
        self.insert(v.iter().map(|&x| BigInt::from(x)).collect());
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "generator has wrong length");
        loop {
            let Some(c) = v.iter().position(|x| !x.is_zero()) else {
                return;
            };
            match self.rows.remove(&c) {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    self.rows.insert(c, v);
                    self.reduce();
                    return;
                }
                Some(r) => {
                    let (g, x, y) = ext_gcd(&r[c], &v[c]);
                    let rc = &r[c] / &g;
                    let vc = &v[c] / &g;
                    let mut merged: Vec<BigInt> =
                        r.iter().zip(&v).map(|(a, b)| &x * a + &y * b).collect();
                    if merged[c].is_negative() {
                        merged.iter_mut().for_each(|t| *t = -t.clone());
                    }
                    let rest: Vec<BigInt> =
                        r.iter().zip(&v).map(|(a, b)| &vc * a - &rc * b).collect();
                    self.rows.insert(c, merged);
                    v = rest;
                }
            }
        }
    }

    // Reduce entries above each pivot into [0, pivot).
    fn reduce(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for (i, &pi) in pivots.iter().enumerate() {
            for &pj in &pivots[i + 1..] {
                let row_j = self.rows[&pj].clone();
                let row_i = self.rows.get_mut(&pi).unwrap();
                let q = row_i[pj].div_floor(&row_j[pj]);
                if !q.is_zero() {
                    for (a, b) in row_i.iter_mut().zip(&row_j) {
                        *a -= &q * b;
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for (&c, r) in &self.rows {
            if v[..c].iter().any(|x| !x.is_zero()) {
                return false;
            }
            if v[c].is_zero() {
                continue;
            }
            let (q, rem) = v[c].div_rem(&r[c]);
            if !rem.is_zero() {
                return false;
            }
            for (a, b) in v.iter_mut().zip(r) {
                *a -= &q * b;
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Nonzero Smith invariant factors `d_1 | d_2 | ...` of the basis.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        smith_invariants(self.basis())
    }

    /// Index of this lattice inside a saturated lattice of rank `target_rank`
    /// containing it; `0` when the rank is deficient.
    pub fn index_in_saturated(&self, target_rank: usize) -> BigInt {
        if self.rank() < target_rank {
            return BigInt::zero();
        }
        assert_eq!(self.rank(), target_rank, "lattice not contained in target");
        self.invariant_factors().iter().product()
    }
}

/// Nonzero invariant factors of an integer matrix given by rows.
pub fn smith_invariants(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = m.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = m[0].len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut done = true;
            let p = m[t][t].clone();
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&p);
                let pivot_row = m[t].clone();
                for (a, b) in m[i].iter_mut().zip(&pivot_row) {
                    *a -= &q * b;
                }
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&p);
                for row in m.iter_mut() {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // divisibility condition on the remaining block
                let mut fix = None;
                'outer: for i in t + 1..nrows {
                    for j in t + 1..ncols {
                        if !(&m[i][j] % &p).is_zero() {
                            fix = Some(i);
                            break 'outer;
                        }
                    }
                }
                match fix {
                    None => break,
                    Some(i) => {
                        let row_i = m[i].clone();
                        for (a, b) in m[t].iter_mut().zip(&row_i) {
                            *a += b;
                        }
                        continue;
                    }
                }
            }
            // move a smaller remainder into the pivot position
            let mut best: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..ncols {
                    if (i == t || j == t)
                        && !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.unwrap();
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    debug_assert!(out.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    out
}
