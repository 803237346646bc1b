//! Configurations of curves on a smooth surface: negative-definiteness,
//! discrepancies of the contraction, and the invariants of the canonical
//! surface built from the extremal configurations.

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Curve {
    pub label: String,
    pub self_intersection: i64,
    pub genus: u64,
}

/// Curves with their pairwise intersection numbers. The diagonal of
/// `intersections` is ignored in favour of each curve's self-intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveConfig {
    curves: Vec<Curve>,
    intersections: Vec<Vec<i64>>,
}

impl CurveConfig {
    pub fn new(curves: Vec<Curve>, intersections: Vec<Vec<i64>>) -> Result<Self> {
        let n = curves.len();
        if intersections.len() != n || intersections.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidConfig("intersection matrix has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && (intersections[i][j] != intersections[j][i] || intersections[i][j] < 0) {
                    return Err(Error::InvalidConfig(format!("bad intersection between curves {i} and {j}")));
                }
            }
        }
        Ok(CurveConfig { curves, intersections })
    }

    /// Chain of smooth rational curves with the given self-intersections.
    pub fn chain(labels: &[&str], self_ints: &[i64]) -> Result<Self> {
        if labels.len() != self_ints.len() {
            return Err(Error::InvalidConfig("label count mismatch".into()));
        }
        let n = labels.len();
        let curves = labels
            .iter()
            .zip(self_ints)
            .map(|(l, &s)| Curve { label: l.to_string(), self_intersection: s, genus: 0 })
            .collect();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n.saturating_sub(1) {
            m[i][i + 1] = 1;
            m[i + 1][i] = 1;
        }
        CurveConfig::new(curves, m)
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let mut m = self.intersections.clone();
        for (i, c) in self.curves.iter().enumerate() {
            m[i][i] = c.self_intersection;
        }
        m
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }
}

/// Fraction-free determinant of the leading `k x k` block.
fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            // a zero pivot means this leading minor vanishes
            minors.push(BigInt::zero());
            minors.resize(n, BigInt::zero());
            return minors;
        }
        minors.push(a[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    minors
}

/// Sylvester: `(-1)^k det_k > 0` for every leading minor.
pub fn is_negative_definite(config: &CurveConfig) -> bool {
    let minors = leading_minors(&config.matrix());
    minors.iter().enumerate().all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() })
}

fn solve(m: &[Vec<i64>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().map(|&x| int(x)).chain(std::iter::once(b.clone())).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

/// Coefficients `a_i` of `K_Z = f^* K_S + sum a_i E_i`, from adjunction
/// `(K_Z + E_i).E_i = 2 g_i - 2`.
pub fn discrepancies(config: &CurveConfig) -> Result<Vec<Rational>> {
    if !is_negative_definite(config) {
        return Err(Error::NotContractible);
    }
    let rhs: Vec<Rational> =
        config.curves.iter().map(|c| int(2 * c.genus as i64 - 2 - c.self_intersection)).collect();
    solve(&config.matrix(), &rhs).ok_or(Error::NotContractible)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionResult {
    pub discrepancies: Vec<Rational>,
    /// `(sum a_i E_i)^2`, never positive.
    pub correction: Rational,
    pub ks_squared: Rational,
}

/// `K_S^2 = K_Z^2 - (sum a_i E_i)^2` for the contraction `Z -> S`.
pub fn contracted_ks2(kz_squared: &Rational, config: &CurveConfig) -> Result<ContractionResult> {
    let a = discrepancies(config)?;
    let m = config.matrix();
    let mut correction = Rational::zero();
    for i in 0..a.len() {
        for j in 0..a.len() {
            correction += &a[i] * &a[j] * int(m[i][j]);
        }
    }
    Ok(ContractionResult { ks_squared: kz_squared - &correction, discrepancies: a, correction })
}

fn check_dim(n: i64) -> Result<(i64, i64)> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    Ok((n / 3, n % 3))
}

/// Least `K^2` of the minimal smooth surface in the fibres of the extremal
/// families, by the residue of `n` mod 3.
pub fn min_surface_volume(n: i64) -> Result<Rational> {
    let (k, r) = check_dim(n)?;
    Ok(int(match r {
        2 => 8 * k,
        1 => 8 * k - 2,
        _ => 8 * k - 4,
    }))
}

/// The `(-2)`-curves `V_i` and the curve `E` with `E^2 = -(k+1)` whose
/// contraction gives the canonical model.
pub fn build_extremal_config(n: i64) -> Result<CurveConfig> {
    let (k, r) = check_dim(n)?;
    let e = -(k + 1);
    match r {
        2 => CurveConfig::chain(&["E"], &[e]),
        1 => CurveConfig::chain(&["V1", "E"], &[-2, e]),
        _ => CurveConfig::chain(&["V1", "E", "V2"], &[-2, e, -2]),
    }
}

/// `K_S^2` of the canonical model obtained by contracting the extremal
/// configuration on the minimal surface.
pub fn surface_ks2(n: i64) -> Result<Rational> {
    let cfg = build_extremal_config(n)?;
    let kz2 = min_surface_volume(n)?;
    Ok(contracted_ks2(&kz2, &cfg)?.ks_squared)
}

/// `K_X^n >= K_S^2 / (n-1)^2`.
pub fn volume_lower_bound_via_surface(n: i64) -> Result<Rational> {
    Ok(surface_ks2(n)? / int((n - 1) * (n - 1)))
}

/// Noether's inequality `K^2 >= 2 p_g - 4`.
pub fn noether_check(k_squared: &Rational, p_g: i64) -> bool {
    *k_squared >= int(2 * p_g - 4)
}

pub fn has_nonpositive_discrepancies(a: &[Rational]) -> bool {
    a.iter().all(|x| !x.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn extremal_volumes() {
        assert_eq!(min_surface_volume(5).unwrap(), int(8));
        assert_eq!(min_surface_volume(4).unwrap(), int(6));
        assert_eq!(min_surface_volume(6).unwrap(), int(12));
        assert_eq!(min_surface_volume(3).unwrap(), int(4));
        assert_eq!(min_surface_volume(2), Err(Error::InvalidDimension(2)));
    }

    #[test]
    fn extremal_configs() {
        let c = build_extremal_config(4).unwrap();
        assert_eq!(c.matrix(), vec![vec![-2, 1], vec![1, -2]]);
        let c = build_extremal_config(6).unwrap();
        assert_eq!(c.matrix(), vec![vec![-2, 1, 0], vec![1, -3, 1], vec![0, 1, -2]]);
        let c = build_extremal_config(5).unwrap();
        assert_eq!(c.matrix(), vec![vec![-2]]);
    }

    #[test]
    fn discrepancy_examples() {
        let c = build_extremal_config(4).unwrap();
        assert_eq!(discrepancies(&c).unwrap(), vec![rat(0, 1), rat(0, 1)]);
        let c = build_extremal_config(6).unwrap();
        let a = discrepancies(&c).unwrap();
        assert_eq!(a[c.index_of("E").unwrap()], rat(-1, 2));
        assert_eq!(a[c.index_of("V1").unwrap()], rat(-1, 4));
        assert_eq!(a[c.index_of("V2").unwrap()], rat(-1, 4));
    }

    #[test]
    fn ks2_examples() {
        assert_eq!(surface_ks2(5).unwrap(), rat(8, 1));
        assert_eq!(surface_ks2(4).unwrap(), rat(6, 1));
        assert_eq!(surface_ks2(6).unwrap(), rat(25, 2));
        assert_eq!(volume_lower_bound_via_surface(6).unwrap(), rat(1, 2));
        assert_eq!(volume_lower_bound_via_surface(5).unwrap(), rat(1, 2));
        for k in 1..20 {
            assert_eq!(surface_ks2(3 * k + 2).unwrap(), rat((3 * k + 1).pow(2), k + 1));
        }
    }

    #[test]
    fn not_contractible() {
        let c = CurveConfig::chain(&["A"], &[1]).unwrap();
        assert_eq!(discrepancies(&c), Err(Error::NotContractible));
        let c = CurveConfig::chain(&["A", "B"], &[-1, -1]).unwrap();
        assert!(!is_negative_definite(&c));
        let z = CurveConfig::chain(&["A"], &[0]).unwrap();
        assert!(!is_negative_definite(&z));
    }

    #[test]
    fn bad_configs() {
        let curves = vec![
            Curve { label: "A".into(), self_intersection: -2, genus: 0 },
            Curve { label: "B".into(), self_intersection: -2, genus: 0 },
        ];
        assert!(CurveConfig::new(curves.clone(), vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(CurveConfig::new(curves, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn noether() {
        assert!(noether_check(&int(8), 6));
        assert!(!noether_check(&int(7), 6));
    }
}
