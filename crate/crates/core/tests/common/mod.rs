#![allow(dead_code)]

use hyperbound::wspace::{Hypersurface, WeightVector};
use rand::Rng;

pub fn pw(p: &[(u64, usize)], d: u64) -> Hypersurface {
    Hypersurface::new(WeightVector::from_powers(p).unwrap(), d).unwrap()
}

/// Optimal corank-one families by residue of n = dim (0: n = 3k+2, 1: n = 3k+1, 2: n = 3k).
pub fn family(kind: u8, k: u64) -> Hypersurface {
    let ku = k as usize;
    match kind {
        0 => pw(&[(1, 3 * ku + 2), (2 * (k + 1), 1), (5 * (k + 1), 1)], 10 * (k + 1)),
        1 => pw(&[(1, 3 * ku + 1), (2 * k + 1, 1), (5 * k + 3, 1)], 10 * k + 6),
        _ => pw(&[(1, 1), (2, 3 * ku - 1), (4 * k, 1), (10 * k + 1, 1)], 20 * k + 2),
    }
}

/// Surface sections of the optimal families, same residue convention.
pub fn surface(kind: u8, k: u64) -> Hypersurface {
    match kind {
        0 => pw(&[(1, 2), (2 * (k + 1), 1), (5 * (k + 1), 1)], 10 * (k + 1)),
        1 => pw(&[(1, 2), (2 * k + 1, 1), (5 * k + 3, 1)], 10 * k + 6),
        _ => pw(&[(1, 1), (2, 1), (4 * k, 1), (10 * k + 1, 1)], 20 * k + 2),
    }
}

/// Naive recursive monomial count.
pub fn brute_count(weights: &[u64], m: u64) -> u64 {
    match weights.split_first() {
        None => u64::from(m == 0),
        Some((&a, rest)) => (0..=m / a).map(|e| brute_count(rest, m - e * a)).sum(),
    }
}

pub fn brute_monomials(weights: &[u64], m: u64) -> Vec<Vec<u64>> {
    match weights.split_first() {
        None if m == 0 => vec![vec![]],
        None => vec![],
        Some((&a, rest)) => (0..=m / a)
            .flat_map(|e| {
                brute_monomials(rest, m - e * a).into_iter().map(move |mut t| {
                    t.insert(0, e);
                    t
                })
            })
            .collect(),
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn primitive_root(p: u64) -> u64 {
    let n = p - 1;
    let factors: Vec<u64> = (2..=n).filter(|&q| n.is_multiple_of(q) && is_prime(q)).collect();
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1)).unwrap()
}

/// Points of `F_p^*` as a log table and its inverse.
pub struct FiniteField {
    pub p: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
}

impl FiniteField {
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p));
        let g = primitive_root(p);
        let mut exp = vec![0; (p - 1) as usize];
        let mut log = vec![0; p as usize];
        let mut x = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u64;
            x = x * g % p;
        }
        FiniteField { p, exp, log }
    }

    pub fn order(&self) -> u64 {
        self.p - 1
    }

    pub fn monomial(&self, point: &[u64], e: &[u64]) -> u64 {
        point.iter().zip(e).fold(1, |acc, (&x, &k)| acc * pow_mod(x, k, self.p) % self.p)
    }
}

fn prime_power_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while n > 1 {
        let mut f = 1;
        while n.is_multiple_of(q) {
            n /= q;
            f *= q;
        }
        if f > 1 {
            out.push(f);
        }
        q += 1;
    }
    out
}

/// Solutions of `v . d = t` (every row) in `(Z/q)^len`, by enumeration.
fn count_mod(q: i64, rows: &[(Vec<i64>, i64)], len: usize) -> u64 {
    let mut d = vec![0i64; len];
    let mut total = 0;
    loop {
        if rows.iter().all(|(v, t)| (v.iter().zip(&d).map(|(a, b)| a * b).sum::<i64>() - t).rem_euclid(q) == 0) {
            total += 1;
        }
        let mut i = 0;
        loop {
            if i == len {
                return total;
            }
            d[i] += 1;
            if d[i] < q {
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

/// Fibre of the monomial map `P(weights) -> P^N` through `point`, counted
/// over `F_p`. Needs a weight-one coordinate, which is normalised to 1.
/// In discrete logs the fibre is an affine system over `Z/(p-1)`, counted
/// one prime-power factor at a time.
pub fn fibre_count(f: &FiniteField, weights: &[u64], exps: &[Vec<u64>], point: &[u64]) -> u64 {
    let i0 = weights.iter().position(|&a| a == 1).expect("weight-one coordinate");
    let n = f.order() as i64;
    let lg = |v: u64| f.log[v as usize] as i64;
    let base: Vec<i64> = exps.iter().map(|e| lg(f.monomial(point, e))).collect();
    let rows: Vec<(Vec<i64>, i64)> = exps
        .iter()
        .zip(&base)
        .skip(1)
        .map(|(e, &b)| {
            let v = (0..weights.len()).filter(|&i| i != i0).map(|i| e[i] as i64 - exps[0][i] as i64).collect();
            (v, (b - base[0]).rem_euclid(n))
        })
        .collect();
    prime_power_factors(f.order())
        .into_iter()
        .map(|q| count_mod(q as i64, &rows, weights.len() - 1))
        .product()
}

pub fn random_point<R: Rng>(f: &FiniteField, len: usize, rng: &mut R) -> Vec<u64> {
    (0..len).map(|_| f.exp[rng.gen_range(0..f.order()) as usize]).collect()
}

/// Signs of the characteristic polynomial coefficients of a symmetric 3x3
/// matrix: all eigenvalues are negative iff `det(t - M)` has only positive
/// coefficients (real-rooted, so Descartes' rule is exact).
pub fn descartes_negative_definite(m: &[Vec<i64>]) -> bool {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    -tr > 0 && minors > 0 && -det > 0
}
