//! Truncated power series over exact rationals, and the integer sequences
//! defined by logarithms and reciprocals of such series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::{self, Limits};

/// A power series known up to and including degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

impl Series {
    /// Builds a series from coefficients of degrees `0..=order`. Missing
    /// coefficients are zero, extra ones are dropped.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> BigRational) -> Self {
        Series {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    /// Integer coefficients, for convenience in tests and small literals.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Series::new(coeffs.iter().map(|&c| rat(c, 1)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::new(vec![BigRational::one()], order)
    }

    /// The series `x`.
    pub fn var(order: usize) -> Self {
        Series::new(vec![BigRational::zero(), BigRational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^n`; zero beyond the stored range is *not* implied, so
    /// asking past the truncation order panics.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Series {
        if self.order() == 0 {
            return Series::zero(0);
        }
        Series {
            coeffs: (1..=self.order())
                .map(|n| &self.coeffs[n] * BigInt::from(n))
                .collect(),
        }
    }

    /// Antiderivative with zero constant term; gains one degree of order.
    pub fn integral(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / BigInt::from(n + 1));
        }
        Series { coeffs }
    }

    /// Reciprocal series; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let a0_inv = a0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(a0_inv.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &a0_inv);
        }
        Ok(Series { coeffs: out })
    }

    /// Natural logarithm; the constant term must be exactly 1.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::LogConstantTerm(self.coeffs[0].to_string()));
        }
        let order = self.order();
        if order == 0 {
            return Ok(Series::zero(0));
        }
        // log a = ∫ a'/a
        let quotient = &self.derivative() * &self.inv()?.truncate(order - 1);
        Ok(quotient.integral())
    }

    /// Exponential; the constant term must be zero.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(crate::error::domain(
                "exp needs a series with zero constant term",
            ));
        }
        // b' = a' b, so n b_n = sum_{k=1}^{n} k a_k b_{n-k}
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(BigRational::one());
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * BigInt::from(k) * &out[n - k];
                }
            }
            out.push(acc / BigInt::from(n));
        }
        Ok(Series { coeffs: out })
    }
}

impl Mul for &Series {
    type Output = Series;

    /// Cauchy product, truncated to the smaller order.
    fn mul(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = BigRational::zero();
                for k in 0..=n {
                    if !self.coeffs[k].is_zero() && !rhs.coeffs[n - k].is_zero() {
                        acc += &self.coeffs[k] * &rhs.coeffs[n - k];
                    }
                }
                acc
            })
            .collect();
        Series { coeffs }
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |n| &self.coeffs[n] + &rhs.coeffs[n])
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |n| &self.coeffs[n] - &rhs.coeffs[n])
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

pub fn series_mul(a: &Series, b: &Series) -> Series {
    a * b
}

pub fn series_inv(a: &Series) -> Result<Series> {
    a.inv()
}

pub fn series_log(a: &Series) -> Result<Series> {
    a.log()
}

pub fn series_exp(a: &Series) -> Result<Series> {
    a.exp()
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Number of minimal elements `M(n)` of an exponential structure, together
/// with the family it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    /// Explicit values `M(0), M(1), ...`; `M(0)` must be 1.
    General(Vec<BigInt>),
    /// Partitions of `[rn]` with block sizes divisible by `r`:
    /// `M(n) = (rn)! / (n! r!^n)`.
    Blocks(usize),
    /// r-partitions of `[n]`: `M(n) = n!^(r-1)`.
    RPartitions(usize),
}

impl SequenceSpec {
    pub fn minimal_count(&self, n: usize) -> Result<BigInt> {
        match self {
            SequenceSpec::General(values) => values.get(n).cloned().ok_or_else(|| {
                crate::error::domain(format!("M({n}) not supplied ({} values given)", values.len()))
            }),
            SequenceSpec::Blocks(r) => {
                let r = *r;
                if r == 0 {
                    return Err(crate::error::domain("block size r must be at least 1"));
                }
                let denom = factorial(n) * num_traits::pow(factorial(r), n);
                Ok(factorial(r * n) / denom)
            }
            SequenceSpec::RPartitions(r) => {
                if *r == 0 {
                    return Err(crate::error::domain("r must be at least 1"));
                }
                Ok(num_traits::pow(factorial(n), r - 1))
            }
        }
    }

    fn validate(&self, upto: usize) -> Result<Vec<BigInt>> {
        let values = (0..=upto)
            .map(|n| self.minimal_count(n))
            .collect::<Result<Vec<_>>>()?;
        if !values[0].is_one() {
            return Err(crate::error::domain("M(0) must be 1"));
        }
        if let Some(n) = values.iter().position(|m| !m.is_positive()) {
            return Err(crate::error::domain(format!("M({n}) must be positive")));
        }
        Ok(values)
    }
}

fn to_integer(degree: usize, value: BigRational) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::NonInteger {
            degree,
            value: value.to_string(),
        })
    }
}

/// `r_1, ..., r_N` where
/// `sum r_n z^n/(n! M(n)) = -log(sum (-1)^n z^n/(n! M(n)))`.
pub fn r_sequence(spec: &SequenceSpec, n_max: usize) -> Result<Vec<BigInt>> {
    if n_max == 0 {
        return Err(crate::error::domain("N must be at least 1"));
    }
    let m = spec.validate(n_max)?;
    let weights: Vec<BigInt> = (0..=n_max).map(|n| factorial(n) * &m[n]).collect();
    let alternating = Series::from_fn(n_max, |n| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        BigRational::new(BigInt::from(sign), weights[n].clone())
    });
    let minus_log = -&alternating.log()?;
    (1..=n_max)
        .map(|n| to_integer(n, minus_log.coeff(n) * &weights[n]))
        .collect()
}

/// Generalized Euler numbers `E_{r-1}, E_{2r-1}, ..., E_{rN-1}`.
pub fn euler_sequence(r: usize, n_max: usize) -> Result<Vec<BigInt>> {
    if r < 2 {
        return Err(crate::error::domain("generalized Euler numbers need r >= 2"));
    }
    r_sequence(&SequenceSpec::Blocks(r), n_max)
}

/// Tangent numbers `E_1, E_3, ..., E_{2N-1}` read off `sin z / cos z`.
pub fn tangent_numbers(n_max: usize) -> Result<Vec<BigInt>> {
    let order = 2 * n_max;
    let sin = Series::from_fn(order, |k| {
        if k % 2 == 0 {
            BigRational::zero()
        } else {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), factorial(k))
        }
    });
    let cos = Series::from_fn(order, |k| {
        if k % 2 == 1 {
            BigRational::zero()
        } else {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), factorial(k))
        }
    });
    let tan = &sin * &cos.inv()?;
    (1..=n_max)
        .map(|n| {
            let k = 2 * n - 1;
            to_integer(k, tan.coeff(k) * factorial(k))
        })
        .collect()
}

/// `τ(1), ..., τ(N)` where `sum τ(n) x^n/n!^2 = 1 / sum (-1)^n x^n/n!^2`.
pub fn tau_sequence(n_max: usize) -> Result<Vec<BigInt>> {
    let squares: Vec<BigInt> = (0..=n_max).map(|n| factorial(n).pow(2)).collect();
    let alternating = Series::from_fn(n_max, |n| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        BigRational::new(BigInt::from(sign), squares[n].clone())
    });
    let inverse = alternating.inv()?;
    (1..=n_max)
        .map(|n| to_integer(n, inverse.coeff(n) * &squares[n]))
        .collect()
}

/// True when the two permutations (one-line, same length) rise together at
/// some position.
pub fn has_common_rise(pi: &[u32], xi: &[u32]) -> bool {
    pi.windows(2)
        .zip(xi.windows(2))
        .any(|(p, x)| p[0] < p[1] && x[0] < x[1])
}

/// Number of pairs of permutations of `[n]` with no common rise, by
/// exhaustive search over all `n!^2` pairs.
pub fn omega_bruteforce(n: usize, limits: &Limits) -> Result<u64> {
    limits::check_usize("n (pair count)", n, limits.omega_n)?;
    let perms = crate::structures::all_permutations(n);
    let mut count = 0u64;
    for pi in &perms {
        for xi in &perms {
            if !has_common_rise(pi.values(), xi.values()) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Converts a small exact integer to `u64`, for comparing with counters.
pub fn as_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}
