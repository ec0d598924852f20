//! q-expansions of `E2`, `E4`, `E6`, products of their powers, and the
//! weight-lifted replacement form used to turn a quotient into a genuine
//! modular form mod `ell` without moving its simple congruences.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::ModularFormModEll;
use crate::modular::{self, is_prime};
use crate::series::{check_modulus, TruncatedSeries};

/// `-2k / B_k` for `k = 2, 4, 6`.
pub const E2_CONSTANT: i64 = -24;
pub const E4_CONSTANT: i64 = 240;
pub const E6_CONSTANT: i64 = -504;

/// Exact `sigma_m(n) = sum_{d | n} d^m` by trial division.
pub fn sigma(m: u32, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::SigmaDomain(n));
    }
    let mut total = BigUint::from(0u32);
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigUint::from(d).pow(m);
            let e = n / d;
            if e != d {
                total += BigUint::from(e).pow(m);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `sigma_power(n) mod modulus` for `0 <= n < len` (entry 0 is 0), by a
/// divisor sieve.
pub fn sigma_table_mod(power: u32, len: usize, modulus: u64) -> Vec<u64> {
    let mut table = vec![0u64; len];
    for d in 1..len {
        let dp = modular::pow_mod(d as u64, power as u64, modulus);
        if dp == 0 {
            continue;
        }
        for slot in table.iter_mut().skip(d).step_by(d) {
            *slot = modular::add_mod(*slot, dp, modulus);
        }
    }
    table
}

/// `E_k` for `k` in {2, 4, 6} modulo `modulus`, known to `precision`.
pub fn eisenstein_series(k: u32, modulus: u64, precision: i64) -> Result<TruncatedSeries> {
    let constant = match k {
        2 => E2_CONSTANT,
        4 => E4_CONSTANT,
        6 => E6_CONSTANT,
        _ => return Err(Error::UnsupportedWeight(k)),
    };
    check_modulus(modulus)?;
    if precision <= 0 {
        return TruncatedSeries::zero(modulus, precision);
    }
    let c = modular::reduce_i64(constant, modulus);
    let mut coeffs = sigma_table_mod(k - 1, precision as usize, modulus);
    for x in coeffs.iter_mut() {
        *x = modular::mul_mod(*x, c, modulus);
    }
    coeffs[0] = 1;
    TruncatedSeries::new(modulus, 0, coeffs)
}

/// The two general-weight Eisenstein series whose reductions mod `ell` are
/// needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedEisenstein {
    /// `E_{ell-1}`, which reduces to 1.
    EllMinusOne,
    /// `E_{ell+1}`, which reduces to `E2`.
    EllPlusOne,
}

pub fn eisenstein_reduced(
    kind: ReducedEisenstein,
    ell: u64,
    precision: i64,
) -> Result<TruncatedSeries> {
    if ell < 5 || !is_prime(ell) {
        return Err(Error::BadPrime(ell, 5));
    }
    match kind {
        ReducedEisenstein::EllMinusOne => TruncatedSeries::one(ell, precision),
        ReducedEisenstein::EllPlusOne => eisenstein_series(2, ell, precision),
    }
}

/// Exponents of `E2^r E4^s E6^t` with `r >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientSpec {
    r: i64,
    s: i64,
    t: i64,
}

impl QuotientSpec {
    pub fn new(r: i64, s: i64, t: i64) -> Result<Self> {
        if r < 0 {
            return Err(Error::NegativeE2Exponent(r));
        }
        Ok(Self { r, s, t })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    /// `r + 4s + 6t`, the part of the lifted weight not divisible by `ell`.
    pub fn weight_excess(&self) -> i64 {
        self.r + 4 * self.s + 6 * self.t
    }

    pub fn is_trivial(&self) -> bool {
        self.r == 0 && self.s == 0 && self.t == 0
    }

    /// Coefficient of `q` in the integral expansion.
    pub fn q_coefficient(&self) -> i128 {
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        -24 * r + 240 * s - 504 * t
    }

    /// Coefficient of `q^2` in the integral expansion.
    pub fn q2_coefficient(&self) -> i128 {
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        288 * r * r - 5760 * r * s + 12096 * r * t - 360 * r + 28800 * s * s
            - 120960 * s * t
            - 26640 * s
            + 127008 * t * t
            - 143640 * t
    }
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E2^{} E4^{} E6^{}", self.r, self.s, self.t)
    }
}

/// `E2^a E4^b E6^c` for arbitrary integer exponents (negative powers go
/// through series inversion; all constant terms are 1).
pub fn eisenstein_product(
    a: i64,
    b: i64,
    c: i64,
    modulus: u64,
    precision: i64,
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(modulus, precision)?;
    for (k, e) in [(2, a), (4, b), (6, c)] {
        if e != 0 {
            let base = eisenstein_series(k, modulus, precision)?;
            acc = acc.mul(&base.pow(e)?)?;
        }
    }
    Ok(acc)
}

pub fn quotient_series(
    spec: &QuotientSpec,
    modulus: u64,
    precision: i64,
) -> Result<TruncatedSeries> {
    eisenstein_product(spec.r, spec.s, spec.t, modulus, precision)
}

/// `E_{ell+1}^r E4^(ell+s) E6^(ell+t)` reduced mod `ell`, realized with `E2`
/// in place of `E_{ell+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedForm {
    pub spec: QuotientSpec,
    pub ell: u64,
    pub weight: u64,
    pub series: TruncatedSeries,
}

impl LiftedForm {
    pub fn form(&self) -> Result<ModularFormModEll> {
        ModularFormModEll::new(self.ell, self.weight, self.series.clone())
    }
}

/// Weight `(r + 10) ell + (r + 4s + 6t)` of the lift.
pub fn lifted_weight(spec: &QuotientSpec, ell: u64) -> i64 {
    (spec.r + 10) * ell as i64 + spec.weight_excess()
}

/// Whether the lift exists at `ell`, i.e. `ell + s >= 0` and `ell + t >= 0`.
pub fn lift_in_range(spec: &QuotientSpec, ell: u64) -> bool {
    let l = ell as i64;
    l + spec.s >= 0 && l + spec.t >= 0
}

pub fn replacement_lift(spec: &QuotientSpec, ell: u64, precision: i64) -> Result<LiftedForm> {
    if ell < 5 || !is_prime(ell) {
        return Err(Error::BadPrime(ell, 5));
    }
    if !lift_in_range(spec, ell) {
        return Err(Error::LiftOutOfRange {
            ell,
            s: spec.s,
            t: spec.t,
        });
    }
    let l = ell as i64;
    let series = eisenstein_product(spec.r, l + spec.s, l + spec.t, ell, precision)?;
    Ok(LiftedForm {
        spec: *spec,
        ell,
        weight: lifted_weight(spec, ell) as u64,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1, 6).unwrap(), BigUint::from(12u32));
        assert_eq!(sigma(3, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(sigma(3, 2).unwrap(), BigUint::from(9u32));
        assert_eq!(sigma(0, 36).unwrap(), BigUint::from(9u32));
        assert!(matches!(sigma(1, 0), Err(Error::SigmaDomain(0))));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let m = 1_000_003u64;
        for power in [1u32, 3, 5, 11] {
            let table = sigma_table_mod(power, 400, m);
            for n in 1..400u64 {
                let exact = sigma(power, n).unwrap() % BigUint::from(m);
                assert_eq!(
                    BigUint::from(table[n as usize]),
                    exact,
                    "sigma_{power}({n})"
                );
            }
        }
    }

    #[test]
    fn leading_coefficients() {
        let big = 1 << 40;
        let e4 = eisenstein_series(4, big, 5).unwrap();
        assert_eq!(e4.coeff(0), Some(1));
        assert_eq!(e4.coeff(1), Some(240));
        assert_eq!(e4.coeff(2), Some(2160));
        let e2 = eisenstein_series(2, 97, 3).unwrap();
        assert_eq!(e2.coeff(1), Some(97 - 24));
        let e6 = eisenstein_series(6, big, 3).unwrap();
        assert_eq!(e6.coeff(1), Some(big - 504));
        assert!(matches!(
            eisenstein_series(8, 7, 3),
            Err(Error::UnsupportedWeight(8))
        ));
    }

    #[test]
    fn reduce_to_one_mod_two_and_three() {
        for k in [2, 4, 6] {
            for m in [2, 3] {
                let e = eisenstein_series(k, m, 200).unwrap();
                assert_eq!(e, TruncatedSeries::one(m, 200).unwrap(), "E{k} mod {m}");
            }
        }
    }

    #[test]
    fn e2_mod_243_reduces_to_one_mod_3() {
        let e2 = eisenstein_series(2, 243, 100).unwrap();
        assert_eq!(
            e2.change_modulus(3).unwrap(),
            TruncatedSeries::one(3, 100).unwrap()
        );
    }

    #[test]
    fn reduced_eisenstein() {
        // E12 = (441 E4^3 + 250 E6^2) / 691, reduced mod 13
        let n = 60;
        let e4 = eisenstein_series(4, 13, n).unwrap();
        let e6 = eisenstein_series(6, 13, n).unwrap();
        let inv691 = modular::inv_mod(691 % 13, 13).unwrap();
        let e12 = e4
            .pow(3)
            .unwrap()
            .scale(441)
            .add(&e6.pow(2).unwrap().scale(250))
            .unwrap()
            .scale(inv691);
        let reduced = eisenstein_reduced(ReducedEisenstein::EllMinusOne, 13, n).unwrap();
        assert_eq!(e12, reduced);
        assert_eq!(reduced, TruncatedSeries::one(13, n).unwrap());

        assert_eq!(
            eisenstein_reduced(ReducedEisenstein::EllPlusOne, 5, n).unwrap(),
            eisenstein_series(2, 5, n).unwrap()
        );
        assert_eq!(
            eisenstein_series(4, 5, n).unwrap(),
            eisenstein_reduced(ReducedEisenstein::EllMinusOne, 5, n).unwrap()
        );
        assert!(eisenstein_reduced(ReducedEisenstein::EllMinusOne, 3, n).is_err());
    }

    #[test]
    fn quotient_leading_coefficients_small_cases() {
        let one = quotient_series(&QuotientSpec::new(0, 0, 0).unwrap(), 7, 5).unwrap();
        assert_eq!(one.to_string(), "1");
        let m = 1_000_000_007u64;
        for (r, s, t) in [(1, 0, 0), (0, -1, 0), (2, 3, -1), (5, -4, 7)] {
            let spec = QuotientSpec::new(r, s, t).unwrap();
            let f = quotient_series(&spec, m, 3).unwrap();
            assert_eq!(
                f.coeff(1),
                Some(modular::reduce_i128(spec.q_coefficient(), m))
            );
            assert_eq!(
                f.coeff(2),
                Some(modular::reduce_i128(spec.q2_coefficient(), m))
            );
        }
        assert!(matches!(
            QuotientSpec::new(-1, 0, 0),
            Err(Error::NegativeE2Exponent(-1))
        ));
    }

    #[test]
    fn e4_e6_mod_11_has_vanishing_low_terms() {
        let e4 = eisenstein_series(4, 11, 3).unwrap();
        let e6 = eisenstein_series(6, 11, 3).unwrap();
        let p = e4.mul(&e6).unwrap();
        assert_eq!(p.coeffs(), &[1, 0, 0]);
    }

    #[test]
    fn lift_weights_and_range() {
        let spec = QuotientSpec::new(0, -12, 1).unwrap();
        let lift = replacement_lift(&spec, 17, 40).unwrap();
        assert_eq!(lift.weight, 128);
        assert!(matches!(
            replacement_lift(&spec, 11, 40),
            Err(Error::LiftOutOfRange { ell: 11, .. })
        ));

        let trivial = QuotientSpec::new(0, 0, 0).unwrap();
        let lift = replacement_lift(&trivial, 5, 60).unwrap();
        assert_eq!(lift.weight, 50);
        assert!(lift.series.terms().all(|(n, c)| c == 0 || n % 5 == 0));
        let e4e6 = eisenstein_product(0, 1, 1, 5, 60).unwrap().pow(5).unwrap();
        assert_eq!(lift.series, e4e6);
    }
}
