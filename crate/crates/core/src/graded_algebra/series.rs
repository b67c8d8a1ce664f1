//! Laurent polynomials with integer coefficients, used as Poincaré series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PoincareSeries {
    coeffs: BTreeMap<i64, i128>,
}

impl PoincareSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c t^d`.
    pub fn monomial(d: i64, c: i128) -> Self {
        let mut s = Self::zero();
        s.add_term(d, c);
        s
    }

    /// The series `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Series from `(degree, dimension)` pairs.
    pub fn from_dims<I: IntoIterator<Item = (i64, u64)>>(dims: I) -> Self {
        let mut s = Self::zero();
        for (d, n) in dims {
            s.add_term(d, n as i128);
        }
        s
    }

    pub fn add_term(&mut self, d: i64, c: i128) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(d).or_insert(0);
        *e = e.checked_add(c).expect("series coefficient overflow");
        if *e == 0 {
            self.coeffs.remove(&d);
        }
    }

    pub fn coeff(&self, d: i64) -> i128 {
        self.coeffs.get(&d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i128)> + '_ {
        self.coeffs.iter().map(|(&d, &c)| (d, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Value at `t = 1`.
    pub fn total(&self) -> i128 {
        self.coeffs.values().sum()
    }

    /// Value at `t = -1`.
    pub fn euler_characteristic(&self) -> i128 {
        self.coeffs
            .iter()
            .map(|(&d, &c)| if d.rem_euclid(2) == 0 { c } else { -c })
            .sum()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        PoincareSeries {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (d + k, c)).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// LaTeX rendering, e.g. `t^{9}+3t^{12}`.
    pub fn to_tex(&self) -> String {
        self.render(|d| format!("t^{{{d}}}"))
    }

    fn render(&self, power: impl Fn(i64) -> String) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (&d, &c)) in self.coeffs.iter().enumerate() {
            let mag = c.unsigned_abs();
            if c < 0 {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            match d {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if mag != 1 {
                        out.push_str(&mag.to_string());
                    }
                    if d == 1 {
                        out.push('t');
                    } else {
                        out.push_str(&power(d));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|d| format!("t^{d}")))
    }
}

impl fmt::Debug for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PoincareSeries({self})")
    }
}

impl Serialize for PoincareSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &PoincareSeries {
    type Output = PoincareSeries;
    fn add(self, rhs: &PoincareSeries) -> PoincareSeries {
        let mut out = self.clone();
        for (&d, &c) in &rhs.coeffs {
            out.add_term(d, c);
        }
        out
    }
}

impl Add for PoincareSeries {
    type Output = PoincareSeries;
    fn add(self, rhs: PoincareSeries) -> PoincareSeries {
        &self + &rhs
    }
}

impl Mul for &PoincareSeries {
    type Output = PoincareSeries;
    fn mul(self, rhs: &PoincareSeries) -> PoincareSeries {
        let mut out = PoincareSeries::zero();
        for (&a, &x) in &self.coeffs {
            for (&b, &y) in &rhs.coeffs {
                out.add_term(a + b, x.checked_mul(y).expect("series coefficient overflow"));
            }
        }
        out
    }
}

impl Mul for PoincareSeries {
    type Output = PoincareSeries;
    fn mul(self, rhs: PoincareSeries) -> PoincareSeries {
        &self * &rhs
    }
}

impl std::iter::Sum for PoincareSeries {
    fn sum<I: Iterator<Item = PoincareSeries>>(iter: I) -> Self {
        iter.fold(PoincareSeries::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        let mut s = PoincareSeries::zero();
        for (d, c) in [(9, 1), (11, 1), (12, 3), (14, 5), (16, 2)] {
            s.add_term(d, c);
        }
        assert_eq!(s.to_string(), "t^9+t^11+3t^12+5t^14+2t^16");
        assert_eq!(s.to_tex(), "t^{9}+t^{11}+3t^{12}+5t^{14}+2t^{16}");
        assert_eq!((PoincareSeries::one() + PoincareSeries::t()).to_string(), "1+t");
        assert_eq!(PoincareSeries::monomial(-1, -2).to_string(), "-2t^-1");
        assert_eq!(PoincareSeries::zero().to_string(), "0");
    }

    #[test]
    fn laurent_arithmetic() {
        let inv_t = PoincareSeries::monomial(-1, 1);
        assert_eq!(&inv_t * &PoincareSeries::t(), PoincareSeries::one());
        let one_plus_t = PoincareSeries::one() + PoincareSeries::t();
        assert_eq!(one_plus_t.pow(2).to_string(), "1+2t+t^2");
        assert_eq!(one_plus_t.pow(3).euler_characteristic(), 0);
        assert_eq!(one_plus_t.pow(3).total(), 8);
    }
}
