//! Univariate polynomials over the rationals, fitted from integer samples.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients `c_0, c_1, ...` of `c_0 + c_1 t + ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// The unique polynomial of degree `< values.len()` with `p(t) = values[t]`.
    pub fn interpolate(values: &[BigInt]) -> Self {
        // Newton form on 0, 1, 2, ...: p(t) = sum_k diff_k * binom(t, k).
        let mut diffs = Vec::with_capacity(values.len());
        let mut row: Vec<BigInt> = values.to_vec();
        while !row.is_empty() {
            diffs.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        let mut coeffs = vec![BigRational::zero(); values.len().max(1)];
        // falling = t (t-1) ... (t-k+1) / k!, in monomial coefficients
        let mut falling = vec![BigRational::one()];
        for (k, d) in diffs.iter().enumerate() {
            for (i, c) in falling.iter().enumerate() {
                coeffs[i] += c * BigRational::from_integer(d.clone());
            }
            let shift = BigRational::from_integer(BigInt::from(k));
            let denom = BigRational::from_integer(BigInt::from(k + 1));
            let mut next = vec![BigRational::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c / &denom;
                next[i] -= c * &shift / &denom;
            }
            falling = next;
        }
        Polynomial::new(coeffs)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_int(&self, t: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(t)))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
