//! Truncated Laurent series in `q` with coefficients in `Z/m`.
//!
//! A [`TruncatedSeries`] knows every coefficient below its precision `N`.
//! The valuation is always the exponent of the first nonzero coefficient,
//! so precision bookkeeping in products is as sharp as possible. The zero
//! series is stored with valuation `min(0, N)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{self, MAX_MODULUS};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedSeries {
    modulus: u64,
    valuation: i64,
    coeffs: Vec<u64>,
    precision: i64,
}

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if !(2..MAX_MODULUS).contains(&m) {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

impl TruncatedSeries {
    /// Builds `sum coeffs[i] q^(valuation + i)` known up to `valuation + coeffs.len()`.
    /// Coefficients are reduced into `[0, m)`.
    pub fn new(modulus: u64, valuation: i64, coeffs: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        let precision = valuation + coeffs.len() as i64;
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(Self::from_parts(modulus, valuation, coeffs, precision))
    }

    /// Like [`TruncatedSeries::new`] but from signed integers.
    pub fn from_i64(modulus: u64, valuation: i64, coeffs: &[i64]) -> Result<Self> {
        check_modulus(modulus)?;
        let precision = valuation + coeffs.len() as i64;
        let coeffs = coeffs
            .iter()
            .map(|&c| modular::reduce_i64(c, modulus))
            .collect();
        Ok(Self::from_parts(modulus, valuation, coeffs, precision))
    }

    /// A polynomial in `q` (nonnegative exponents) known to precision `precision`.
    /// Terms at or above the precision are dropped.
    pub fn polynomial(modulus: u64, coeffs: &[i64], precision: i64) -> Result<Self> {
        check_modulus(modulus)?;
        let len = precision.max(0) as usize;
        let mut out = vec![0u64; len];
        for (slot, &c) in out.iter_mut().zip(coeffs) {
            *slot = modular::reduce_i64(c, modulus);
        }
        Ok(Self::from_parts(modulus, 0, out, precision))
    }

    pub fn zero(modulus: u64, precision: i64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::from_parts(modulus, 0, Vec::new(), precision))
    }

    pub fn one(modulus: u64, precision: i64) -> Result<Self> {
        Self::polynomial(modulus, &[1], precision)
    }

    /// Normalizing constructor; callers guarantee `coeffs` are already reduced
    /// and `coeffs.len() == precision - valuation` (shorter vectors are
    /// zero-padded, longer ones truncated).
    pub(crate) fn from_parts(
        modulus: u64,
        valuation: i64,
        mut coeffs: Vec<u64>,
        precision: i64,
    ) -> Self {
        let len = (precision - valuation).max(0) as usize;
        coeffs.resize(len, 0);
        match coeffs.iter().position(|&c| c != 0) {
            Some(first) => {
                coeffs.drain(..first);
                Self {
                    modulus,
                    valuation: valuation + first as i64,
                    coeffs,
                    precision,
                }
            }
            None => {
                let valuation = precision.min(0);
                Self {
                    modulus,
                    valuation,
                    coeffs: vec![0; (precision - valuation) as usize],
                    precision,
                }
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Stored coefficients, starting at exponent [`valuation`](Self::valuation).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `q^n`, or `None` if `n` is at or beyond the precision.
    pub fn coeff(&self, n: i64) -> Option<u64> {
        if n >= self.precision {
            None
        } else if n < self.valuation {
            Some(0)
        } else {
            Some(self.coeffs[(n - self.valuation) as usize])
        }
    }

    /// Iterates `(exponent, coefficient)` over all stored positions.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let v = self.valuation;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (v + i as i64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Drops everything at or above `precision` (no-op if already lower).
    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        Self::from_parts(self.modulus, self.valuation, self.coeffs.clone(), precision)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, modular::add_mod)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, modular::sub_mod)
    }

    fn combine(&self, other: &Self, op: impl Fn(u64, u64, u64) -> u64) -> Result<Self> {
        self.check_same_ring(other)?;
        let m = self.modulus;
        let precision = self.precision.min(other.precision);
        let valuation = self.valuation.min(other.valuation).min(precision);
        let coeffs = (valuation..precision)
            .map(|n| op(self.coeff(n).unwrap_or(0), other.coeff(n).unwrap_or(0), m))
            .collect();
        Ok(Self::from_parts(m, valuation, coeffs, precision))
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| modular::neg_mod(c, m))
            .collect();
        Self::from_parts(m, self.valuation, coeffs, self.precision)
    }

    pub fn scale(&self, k: u64) -> Self {
        let m = self.modulus;
        let k = k % m;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| modular::mul_mod(c, k, m))
            .collect();
        Self::from_parts(m, self.valuation, coeffs, self.precision)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_parts(
            self.modulus,
            self.valuation + k,
            self.coeffs.clone(),
            self.precision + k,
        )
    }

    /// Cauchy product. The result is known up to
    /// `min(N_f + v_g, N_g + v_f)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let valuation = self.valuation + other.valuation;
        let precision = (self.precision + other.valuation).min(other.precision + self.valuation);
        let len = (precision - valuation).max(0) as usize;
        let coeffs = convolve(&self.coeffs, &other.coeffs, len, self.modulus);
        Ok(Self::from_parts(self.modulus, valuation, coeffs, precision))
    }

    /// Multiplicative inverse of a series with valuation 0 and unit constant
    /// term, to the same precision.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonUnitConstant(0));
        }
        if self.valuation != 0 {
            return Err(Error::NonzeroValuation(self.valuation));
        }
        let m = self.modulus;
        let c0 = self.coeffs[0];
        let c0_inv = modular::inv_mod(c0, m).ok_or(Error::NonUnitConstant(c0))?;
        let len = self.coeffs.len();
        let f = &self.coeffs;
        let mut g = vec![0u64; len];
        g[0] = c0_inv;
        let acc = Accumulator::new(m, len);
        for n in 1..len {
            let s = acc.dot((1..=n).map(|k| (f[k], g[n - k])));
            g[n] = modular::mul_mod(modular::neg_mod(s, m), c0_inv, m);
        }
        Ok(Self::from_parts(m, 0, g, self.precision))
    }

    /// `f^e` by binary powering; negative exponents go through [`invert`](Self::invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let len = base.precision - base.valuation;
        let mut acc = Self::one(base.modulus, len)?;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// The operator `q d/dq`: the coefficient of `q^n` is multiplied by `n`.
    pub fn theta(&self) -> Self {
        self.theta_pow(1)
    }

    /// `theta` applied `k` times, computed as `a(n) -> n^k a(n)`.
    pub fn theta_pow(&self, k: u64) -> Self {
        let m = self.modulus;
        let coeffs = self
            .terms()
            .map(|(n, c)| {
                if c == 0 {
                    0
                } else {
                    let nk = modular::pow_mod(modular::reduce_i64(n, m), k, m);
                    modular::mul_mod(c, nk, m)
                }
            })
            .collect();
        Self::from_parts(m, self.valuation, coeffs, self.precision)
    }

    /// The series `sum_n a(step*n + c) q^n` over every `n` whose source
    /// exponent lies in the known range.
    pub fn extract_progression(&self, c: i64, step: i64) -> Result<Self> {
        if step < 1 || c < 0 || c >= step {
            return Err(Error::InvalidArgument(format!(
                "progression needs 0 <= c < step, got c = {c}, step = {step}"
            )));
        }
        // smallest n with step*n + c >= valuation, and first n with step*n + c >= precision
        let lo = (self.valuation - c + step - 1).div_euclid(step);
        let hi = (self.precision - c + step - 1).div_euclid(step);
        let coeffs = (lo..hi)
            .map(|n| self.coeff(step * n + c).unwrap_or(0))
            .collect();
        Ok(Self::from_parts(self.modulus, lo, coeffs, hi))
    }

    /// Coefficient-wise reduction to a modulus dividing the current one.
    pub fn change_modulus(&self, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        if !self.modulus.is_multiple_of(modulus) {
            return Err(Error::NotADivisor {
                from: self.modulus,
                to: modulus,
            });
        }
        let coeffs = self.coeffs.iter().map(|&c| c % modulus).collect();
        Ok(Self::from_parts(
            modulus,
            self.valuation,
            coeffs,
            self.precision,
        ))
    }

    /// Whether `self` and `other` agree on every exponent below `upto`.
    /// Both must be known that far.
    pub fn agrees_through(&self, other: &Self, upto: i64) -> Result<bool> {
        self.check_same_ring(other)?;
        let have = self.precision.min(other.precision);
        if have < upto {
            return Err(Error::InsufficientPrecision {
                needed: upto,
                available: have,
            });
        }
        let lo = self.valuation.min(other.valuation);
        Ok((lo..upto).all(|n| self.coeff(n) == other.coeff(n)))
    }
}

/// Dot products of residues with as few reductions as the modulus allows.
#[derive(Clone, Copy)]
struct Accumulator {
    m: u64,
    mode: AccMode,
}

#[derive(Clone, Copy)]
enum AccMode {
    /// every partial sum of at most `len` products fits in a u64
    Word,
    /// products fit in a u64, sums in a u128
    Wide,
    /// reduce each product
    Reduce,
}

impl Accumulator {
    fn new(m: u64, len: usize) -> Self {
        let max_product = (m as u128 - 1) * (m as u128 - 1);
        let mode = if max_product.saturating_mul(len.max(1) as u128) <= u64::MAX as u128 {
            AccMode::Word
        } else if max_product <= u64::MAX as u128 {
            AccMode::Wide
        } else {
            AccMode::Reduce
        };
        Self { m, mode }
    }

    #[inline]
    fn dot(&self, pairs: impl Iterator<Item = (u64, u64)>) -> u64 {
        let m = self.m;
        match self.mode {
            AccMode::Word => {
                let s: u64 = pairs.map(|(a, b)| a * b).sum();
                s % m
            }
            AccMode::Wide => {
                let s: u128 = pairs.map(|(a, b)| (a * b) as u128).sum();
                (s % m as u128) as u64
            }
            AccMode::Reduce => pairs.fold(0, |s, (a, b)| {
                modular::add_mod(s, modular::mul_mod(a, b, m), m)
            }),
        }
    }
}

/// First `len` coefficients of the product of two coefficient vectors.
fn convolve(a: &[u64], b: &[u64], len: usize, m: u64) -> Vec<u64> {
    let acc = Accumulator::new(m, len);
    (0..len)
        .map(|n| {
            let lo = n.saturating_sub(b.len().saturating_sub(1));
            let hi = n.min(a.len().saturating_sub(1));
            if a.is_empty() || b.is_empty() || lo > hi {
                return 0;
            }
            acc.dot((lo..=hi).map(|i| (a[i], b[n - i])))
        })
        .collect()
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms().filter(|&(_, c)| c != 0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (n, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "q")?,
                (1, c) => write!(f, "{c}*q")?,
                (n, 1) => write!(f, "q^{n}")?,
                (n, c) => write!(f, "{c}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
