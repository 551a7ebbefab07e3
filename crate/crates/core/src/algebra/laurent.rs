use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rat, Rational};
use crate::error::{Error, Result};

/// Element of `Q[t, t^-1]`, stored as a finite exponent -> coefficient map.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of Laurent polynomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    coeffs: BTreeMap<i64, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    /// `coeff * t^exp`.
    pub fn monomial(exp: i64, coeff: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        Self { coeffs }
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(exp, Rational::one())
    }

    /// Builds a Laurent polynomial from `(exponent, integer coefficient)`
    /// pairs; repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, &rat(c));
        }
        out
    }

    /// Reads a coefficient vector whose first entry is the coefficient of `t^lo`.
    pub fn from_coords(lo: i64, coords: &[Rational]) -> Self {
        let mut out = Self::zero();
        for (i, c) in coords.iter().enumerate() {
            out.add_term(lo + i as i64, c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// True when every exponent lies in `[lo, hi]`.
    pub fn supported_in(&self, lo: i64, hi: i64) -> bool {
        self.terms().all(|(e, _)| lo <= e && e <= hi)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Coefficients of `t^lo, ..., t^(lo+len-1)`, or `None` if some term
    /// falls outside that range.
    pub fn to_coords(&self, lo: i64, len: usize) -> Option<Vec<Rational>> {
        if !self.supported_in(lo, lo + len as i64 - 1) {
            return None;
        }
        Some((0..len).map(|i| self.coeff(lo + i as i64)).collect())
    }

    /// Exact quotient `self / divisor` in the Laurent ring, if it exists.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        let (d_lo, d_hi) = (divisor.min_degree()?, divisor.max_degree()?);
        let (p_lo, _) = match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Some(Self::zero()),
        };
        let lead = divisor.coeff(d_hi);
        // any exact quotient has support in [p_lo - d_lo, p_hi - d_hi]
        let floor = p_lo - d_lo;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(top) = rem.max_degree() {
            let shift = top - d_hi;
            if shift < floor {
                return None;
            }
            let c = rem.coeff(top) / &lead;
            rem = &rem - &divisor.shift(shift).scale(&c);
            quot.add_term(shift, &c);
        }
        Some(quot)
    }
}

/// Unique representative of `p` modulo `q` with support in
/// `[lo, lo + width - 1]`.
///
/// `q` must span exactly `width` degrees and have leading and trailing
/// coefficients `±1`. Terms above the window are cancelled with the top term
/// of a shifted `q`, then terms below it with the bottom term; neither pass
/// can push support back across the opposite edge.
pub fn window_reduce(p: &Laurent, q: &Laurent, lo: i64, width: i64) -> Result<Laurent> {
    let (q_lo, q_hi) = match (q.min_degree(), q.max_degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::NonUnitExtremes {
                low: "0".into(),
                high: "0".into(),
            })
        }
    };
    let span = q_hi - q_lo;
    if width < 1 || width != span {
        return Err(Error::WidthMismatch { width, span });
    }
    let (low, high) = (q.coeff(q_lo), q.coeff(q_hi));
    if !low.abs().is_one() || !high.abs().is_one() {
        return Err(Error::NonUnitExtremes {
            low: format_rational(&low),
            high: format_rational(&high),
        });
    }
    let hi = lo + width - 1;
    let mut r = p.clone();
    while let Some(top) = r.max_degree().filter(|&d| d > hi) {
        let c = r.coeff(top) / &high;
        r = &r - &q.shift(top - q_hi).scale(&c);
    }
    while let Some(bottom) = r.min_degree().filter(|&d| d < lo) {
        let c = r.coeff(bottom) / &low;
        r = &r - &q.shift(bottom - q_lo).scale(&c);
    }
    Ok(r)
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, &-c);
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono)?;
            }
        }
        Ok(())
    }
}
