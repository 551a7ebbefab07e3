use serde::{Deserialize, Serialize};

use crate::algebra::Laurent;
use crate::error::{Error, Result};

/// Largest window width accepted from user input; every K-map is a dense
/// `(η+1) x (η+1)` rational matrix.
pub const MAX_ETA: i64 = 256;

/// Which side of the wall: `Minus` is cut out by the positive-weight
/// coordinates, `Plus` by the negative-weight ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

/// A `C*` action on `C^n` with the given weights, together with the window
/// base `k0`. All derived quantities are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallModel {
    weights: Vec<i64>,
    window_base: i64,
    eta: i64,
    codim_z: usize,
    positive: usize,
    negative: usize,
    q_minus: Laurent,
    q_plus: Laurent,
}

/// `∏ (1 - t^a)` over the given weights.
fn koszul_product<'a>(weights: impl Iterator<Item = &'a i64>) -> Laurent {
    weights.fold(Laurent::one(), |acc, &a| {
        &acc * &Laurent::from_terms([(0, 1), (a, -1)])
    })
}

impl WallModel {
    pub fn new(weights: Vec<i64>, window_base: i64) -> Result<Self> {
        let has_pos = weights.iter().any(|&a| a > 0);
        let has_neg = weights.iter().any(|&a| a < 0);
        if !has_pos || !has_neg {
            return Err(Error::NoWall);
        }
        let sum: i128 = weights.iter().map(|&a| a as i128).sum();
        if sum != 0 {
            return Err(Error::NotCalabiYau {
                sum: sum.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
            });
        }
        let eta: i128 = weights.iter().filter(|&&a| a > 0).map(|&a| a as i128).sum();
        if eta > MAX_ETA as i128 {
            return Err(Error::InvalidInput(format!(
                "window width {eta} exceeds the supported maximum {MAX_ETA}"
            )));
        }
        let eta = eta as i64;
        if window_base.checked_add(eta + 1).is_none() || window_base.checked_sub(eta + 1).is_none()
        {
            return Err(Error::InvalidInput(format!(
                "window base {window_base} out of range"
            )));
        }
        let positive = weights.iter().filter(|&&a| a > 0).count();
        let negative = weights.iter().filter(|&&a| a < 0).count();
        let q_minus = koszul_product(weights.iter().filter(|&&a| a > 0));
        let q_plus = koszul_product(weights.iter().filter(|&&a| a < 0));
        Ok(Self {
            weights,
            window_base,
            eta,
            codim_z: positive + negative,
            positive,
            negative,
            q_minus,
            q_plus,
        })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn window_base(&self) -> i64 {
        self.window_base
    }

    /// Window width: the sum of the positive weights.
    pub fn eta(&self) -> i64 {
        self.eta
    }

    /// Number of nonzero weights.
    pub fn codim_z(&self) -> usize {
        self.codim_z
    }

    pub fn positive_count(&self) -> usize {
        self.positive
    }

    pub fn negative_count(&self) -> usize {
        self.negative
    }

    /// `∏_{a>0} (1 - t^a)`, supported on `[0, η]`.
    pub fn q_minus(&self) -> &Laurent {
        &self.q_minus
    }

    /// `∏_{a<0} (1 - t^a)`, supported on `[-η, 0]`.
    pub fn q_plus(&self) -> &Laurent {
        &self.q_plus
    }

    pub fn modulus(&self, side: Side) -> &Laurent {
        match side {
            Side::Minus => &self.q_minus,
            Side::Plus => &self.q_plus,
        }
    }

    /// `t^twist · q_side`: the class of the structure sheaf of the blade
    /// cut out on that side, twisted by the character `t^twist`.
    pub fn koszul_class(&self, side: Side, twist: i64) -> Laurent {
        self.modulus(side).shift(twist)
    }

    pub fn bases(&self) -> WindowBases {
        let k0 = self.window_base;
        let eta = self.eta;
        WindowBases {
            c_basis: (k0..=k0 + eta).collect(),
            g_minus_basis: (k0..k0 + eta).collect(),
            g_plus_basis: (k0 + 1..=k0 + eta).collect(),
        }
    }
}

/// Exponents of the character bases of `K(C)` and of the two windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowBases {
    pub c_basis: Vec<i64>,
    pub g_minus_basis: Vec<i64>,
    pub g_plus_basis: Vec<i64>,
}

pub fn exponent_label(e: i64) -> String {
    format!("t^{e}")
}

pub fn exponent_labels(exps: &[i64]) -> Vec<String> {
    exps.iter().map(|&e| exponent_label(e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_p1() {
        let m = WallModel::new(vec![1, 1, -2], -1).unwrap();
        assert_eq!(m.eta(), 2);
        assert_eq!(m.codim_z(), 3);
        assert_eq!(m.q_minus(), &Laurent::from_terms([(0, 1), (1, -2), (2, 1)]));
        assert_eq!(m.q_plus(), &Laurent::from_terms([(0, 1), (-2, -1)]));
        let b = m.bases();
        assert_eq!(b.c_basis, vec![-1, 0, 1]);
        assert_eq!(b.g_minus_basis, vec![-1, 0]);
        assert_eq!(b.g_plus_basis, vec![0, 1]);
    }

    #[test]
    fn conifold() {
        let m = WallModel::new(vec![1, 1, -1, -1], -1).unwrap();
        assert_eq!((m.eta(), m.codim_z()), (2, 4));
    }

    #[test]
    fn rejections() {
        assert_eq!(
            WallModel::new(vec![1, 1, -3], 0),
            Err(Error::NotCalabiYau { sum: -1 })
        );
        assert_eq!(WallModel::new(vec![1, 1], 0), Err(Error::NoWall));
        assert_eq!(WallModel::new(vec![0, -1], 0), Err(Error::NoWall));
        assert_eq!(WallModel::new(vec![], 0), Err(Error::NoWall));
        assert!(matches!(
            WallModel::new(vec![1000, -1000], 0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            WallModel::new(vec![i64::MAX, i64::MAX, -1], 0),
            Err(Error::NotCalabiYau { .. })
        ));
        assert!(matches!(
            WallModel::new(vec![1, -1], i64::MAX),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn zero_weights_do_not_contribute() {
        let a = WallModel::new(vec![1, 0, 0, -1], 0).unwrap();
        let b = WallModel::new(vec![1, -1], 0).unwrap();
        assert_eq!(a.codim_z(), 2);
        assert_eq!(
            (a.q_minus(), a.q_plus(), a.eta()),
            (b.q_minus(), b.q_plus(), b.eta())
        );
    }

    #[test]
    fn koszul_classes() {
        let p1 = WallModel::new(vec![1, 1, -2], -1).unwrap();
        assert_eq!(
            p1.koszul_class(Side::Minus, -1),
            Laurent::from_terms([(-1, 1), (0, -2), (1, 1)])
        );
        assert_eq!(
            p1.koszul_class(Side::Plus, 1),
            Laurent::from_terms([(1, 1), (-1, -1)])
        );
    }

    #[test]
    fn standard_flop_classes_agree_up_to_sign() {
        for d in 1..=4usize {
            let mut w = vec![1; d];
            w.extend(vec![-1; d]);
            let m = WallModel::new(w, 0).unwrap();
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let rhs = m
                .koszul_class(Side::Plus, d as i64)
                .scale(&crate::algebra::rat(sign));
            assert_eq!(m.koszul_class(Side::Minus, 0), rhs);
        }
    }
}
