//! Tate cycles of the theta operator and simple congruences.
//!
//! A simple congruence of `f` at `c != 0 mod ell` holds exactly when
//! `theta^((ell+1)/2) f = -(c/ell) theta f mod ell`. Both sides are
//! reductions of forms whose weights differ by a multiple of `ell - 1`, so
//! comparing them through the Sturm bound of the larger weight is a proof.
//! The heuristic detector instead looks at a finite window of coefficients.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eisenstein::{
    lift_in_range, lifted_weight, quotient_series, replacement_lift, QuotientSpec,
};
use crate::error::{Error, Result};
use crate::filtration::{filtration, lower_to_filtration, sturm, ModularFormModEll};
use crate::modular::{self, gcd, is_prime, prime_divisors};
use crate::series::TruncatedSeries;

/// Legendre symbol by Euler's criterion. `ell` must be an odd prime.
pub fn legendre(c: i64, ell: u64) -> i8 {
    let c = modular::reduce_i64(c, ell);
    if c == 0 {
        return 0;
    }
    if modular::pow_mod(c, (ell - 1) / 2, ell) == 1 {
        1
    } else {
        -1
    }
}

/// How a set of residues was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Finite window of coefficients; not a proof.
    Heuristic,
    /// Theta-power identity checked through the Sturm bound.
    RigorousSturm,
    /// `theta f = 0 mod ell`: every `c != 0` is a congruence.
    ThetaVanishing,
    /// `ell` in {2, 3}, where every factor reduces to 1.
    TrivialPrime,
    /// `ell < |s|` or `ell < |t|`: the lift is unavailable and the prime is
    /// already below the bound; residues come from a finite window.
    BelowBoundBySize,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Heuristic => "heuristic",
            Method::RigorousSturm => "rigorous-sturm",
            Method::ThetaVanishing => "theta-vanishing",
            Method::TrivialPrime => "trivial-prime",
            Method::BelowBoundBySize => "below-bound-by-size",
        }
    }

    pub fn is_rigorous(&self) -> bool {
        matches!(
            self,
            Method::RigorousSturm | Method::ThetaVanishing | Method::TrivialPrime
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// Filtrations along `theta f, ..., theta^(ell-1) f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateCycleProfile {
    pub ell: u64,
    /// Weight the input form was tagged with.
    pub weight: u64,
    /// `omega(f)` itself.
    pub base_filtration: u64,
    /// `filtrations[i - 1] = omega(theta^i f)` for `i = 1..ell-1`.
    pub filtrations: Vec<u64>,
    /// Indices `i` with `omega(theta^i f) = 0 mod ell`.
    pub high_points: Vec<u64>,
    /// Successor of each high point (index `ell - 1` wraps to 1).
    pub low_points: Vec<u64>,
    /// Drop `s` at each low point:
    /// `omega(theta^(i+1) f) = omega(theta^i f) + ell + 1 - s (ell - 1)`.
    pub falls: Vec<i64>,
}

impl TateCycleProfile {
    /// `omega(theta^i f)` for `1 <= i <= ell`, using `theta^ell f = theta f`.
    pub fn filtration_at(&self, i: u64) -> u64 {
        let idx = if i == self.ell { 1 } else { i };
        self.filtrations[(idx - 1) as usize]
    }

    /// `(A, B)` with `omega(f) = A ell + B`.
    pub fn quotient_remainder(&self) -> (u64, u64) {
        (
            self.base_filtration / self.ell,
            self.base_filtration % self.ell,
        )
    }

    /// Structural facts every Tate cycle satisfies; returns a description
    /// of each one that fails.
    pub fn violations(&self) -> Vec<String> {
        let ell = self.ell;
        let mut out = Vec::new();
        for i in 1..ell {
            let here = self.filtration_at(i);
            let next = self.filtration_at(i + 1);
            if !here.is_multiple_of(ell) && next != here + ell + 1 {
                out.push(format!(
                    "omega(theta^{} f) = {next}, expected {} + {}",
                    i + 1,
                    here,
                    ell + 1
                ));
            }
        }
        for ((&high, &low), &s) in self
            .high_points
            .iter()
            .zip(&self.low_points)
            .zip(&self.falls)
        {
            let drop = (self.filtration_at(high) + ell + 1) as i64 - self.filtration_at(low) as i64;
            if drop % (ell as i64 - 1) != 0 {
                out.push(format!(
                    "drop {drop} at low point {low} is not a multiple of {}",
                    ell - 1
                ));
            }
            if s < 1 {
                out.push(format!("fall at low point {low} is {s} < 1"));
            }
        }
        match self.low_points.len() {
            1 => {
                let w = self.filtration_at(self.low_points[0]);
                if w % ell != 2 {
                    out.push(format!(
                        "single low point has filtration {w}, not 2 mod {ell}"
                    ));
                }
            }
            2 => {}
            n => out.push(format!("{n} low points, expected one or two")),
        }
        out
    }
}

/// Coefficients needed to profile the cycle of a weight-`k` form.
pub fn tate_cycle_precision(weight: u64, ell: u64) -> u64 {
    sturm(weight + (ell - 1) * (ell + 1)) + 1
}

pub fn tate_cycle(f: &ModularFormModEll) -> Result<TateCycleProfile> {
    let ell = f.ell();
    f.require_precision(tate_cycle_precision(f.weight(), ell))?;
    let theta_f = f.theta();
    if theta_f.is_zero()? {
        return Err(Error::ThetaVanishes(ell));
    }
    if f.series().theta_pow(ell) != *theta_f.series() {
        return Err(Error::InvalidArgument(format!(
            "theta^{ell} f differs from theta f; the series is not reduced mod {ell}"
        )));
    }

    let base_filtration = filtration(f)?;
    let mut filtrations = Vec::with_capacity(ell as usize - 1);
    let mut current = theta_f;
    for i in 1..ell {
        let (w, lowered) = lower_to_filtration(&current)?;
        filtrations.push(w);
        if i + 1 < ell {
            current = lowered.theta();
        }
    }

    let mut high_points = Vec::new();
    let mut low_points = Vec::new();
    let mut falls = Vec::new();
    for i in 1..ell {
        let w = filtrations[(i - 1) as usize];
        if w % ell == 0 {
            let next = if i + 1 == ell { 1 } else { i + 1 };
            let w_next = filtrations[(next - 1) as usize];
            let drop = w as i64 + ell as i64 + 1 - w_next as i64;
            high_points.push(i);
            low_points.push(next);
            falls.push(drop.div_euclid(ell as i64 - 1));
        }
    }

    Ok(TateCycleProfile {
        ell,
        weight: f.weight(),
        base_filtration,
        filtrations,
        high_points,
        low_points,
        falls,
    })
}

/// Least precision at which the theta-power identity is certified for a
/// weight-`k` form mod `ell`.
pub fn rigorous_precision(weight: u64, ell: u64) -> u64 {
    sturm(weight + (ell + 1) * (ell + 1) / 2) + 1
}

/// Whether `theta^((ell+1)/2) f = -eps theta f` through the certified range.
fn quadratic_class_holds(f: &ModularFormModEll, eps: i8, upto: u64) -> bool {
    let ell = f.ell();
    let half = ell.div_ceil(2);
    let s = f.series();
    (0..upto as i64).all(|n| {
        let a = s.coeff(n).unwrap_or(0);
        if a == 0 {
            return true;
        }
        let nr = modular::reduce_i64(n, ell);
        let lhs = modular::mul_mod(modular::pow_mod(nr, half, ell), a, ell);
        let rhs = modular::mul_mod(nr, a, ell);
        let rhs = if eps == 1 {
            modular::neg_mod(rhs, ell)
        } else {
            rhs
        };
        lhs == rhs
    })
}

fn rigorous_preconditions(f: &ModularFormModEll) -> Result<u64> {
    let ell = f.ell();
    let needed = rigorous_precision(f.weight(), ell);
    f.require_precision(needed)?;
    if f.theta().is_zero()? {
        return Err(Error::ThetaVanishes(ell));
    }
    Ok(needed)
}

/// Decides the simple congruence of `f` at `c` (with `1 <= c < ell`).
pub fn rigorous_simple_congruence(f: &ModularFormModEll, c: u64) -> Result<bool> {
    let ell = f.ell();
    if c == 0 || c >= ell {
        return Err(Error::ResidueOutOfRange(c, ell));
    }
    let needed = rigorous_preconditions(f)?;
    Ok(quadratic_class_holds(f, legendre(c as i64, ell), needed))
}

/// Every `c` in `1..ell` with a certified simple congruence.
pub fn rigorous_simple_congruences(f: &ModularFormModEll) -> Result<BTreeSet<u64>> {
    let ell = f.ell();
    let needed = rigorous_preconditions(f)?;
    let mut out = BTreeSet::new();
    for eps in [1i8, -1] {
        if quadratic_class_holds(f, eps, needed) {
            out.extend((1..ell).filter(|&c| legendre(c as i64, ell) == eps));
        }
    }
    Ok(out)
}

/// Residues `c` in `[0, ell)` whose progression vanishes mod `ell` on every
/// known coefficient. Not a proof.
pub fn heuristic_simple_congruences(series: &TruncatedSeries, ell: u64) -> Result<BTreeSet<u64>> {
    if ell < 2 || !series.modulus().is_multiple_of(ell) {
        return Err(Error::ModulusMismatch {
            left: series.modulus(),
            right: ell,
        });
    }
    let mut alive = vec![true; ell as usize];
    for (n, a) in series.terms() {
        if a % ell != 0 {
            alive[n.rem_euclid(ell as i64) as usize] = false;
        }
    }
    Ok((0..ell).filter(|&c| alive[c as usize]).collect())
}

/// Whether every coefficient `a(n)` with `ell` not dividing `n` vanishes mod
/// `ell` below `precision`.
pub fn theta_vanishes(spec: &QuotientSpec, ell: u64, precision: i64) -> Result<bool> {
    if !is_prime(ell) {
        return Err(Error::BadPrime(ell, 2));
    }
    let f = quotient_series(spec, ell, precision)?;
    let vanishes = f.terms().all(|(n, a)| a == 0 || n % ell as i64 == 0);
    Ok(vanishes)
}

/// A set of primes that may be all primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeSet {
    All,
    Finite(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::All => true,
            PrimeSet::Finite(s) => s.contains(&p),
        }
    }
}

/// Primes that always need a direct check because the elimination argument
/// does not reach them.
pub const SMALL_THETA_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Whether the `q`, `q^2` and weight congruences all hold mod `p`.
pub fn theta_system_holds(spec: &QuotientSpec, p: u64) -> bool {
    let m = p as i128;
    spec.q_coefficient() % m == 0
        && spec.q2_coefficient() % m == 0
        && spec.weight_excess() as i128 % m == 0
}

/// Primes at which `theta(E2^r E4^s E6^t)` can vanish.
///
/// For `p >= 17` the vanishing of the `q` and `q^2` coefficients together
/// with `r + 4s + 6t = 0 mod p` forces `7r = -72t`, `14s = 15t` and then
/// `8255520 t = 0`; since `8255520 = 2^5 3^4 5 7^2 13`, that leaves the
/// primes dividing `gcd(r, s, t)`.
pub fn theta_vanishing_prime_candidates(spec: &QuotientSpec) -> PrimeSet {
    if spec.is_trivial() {
        return PrimeSet::All;
    }
    let mut out: BTreeSet<u64> = SMALL_THETA_PRIMES.into_iter().collect();
    let g = gcd(
        gcd(spec.r().unsigned_abs(), spec.s().unsigned_abs()),
        spec.t().unsigned_abs(),
    );
    for p in prime_divisors(g) {
        if p >= 17 && theta_system_holds(spec, p) {
            out.insert(p);
        }
    }
    PrimeSet::Finite(out)
}

/// Candidates confirmed by expanding the series to `precision`.
pub fn confirmed_theta_vanishing_primes(spec: &QuotientSpec, precision: i64) -> Result<PrimeSet> {
    match theta_vanishing_prime_candidates(spec) {
        PrimeSet::All => Ok(PrimeSet::All),
        PrimeSet::Finite(c) => {
            let mut out = BTreeSet::new();
            for p in c {
                if theta_vanishes(spec, p, precision)? {
                    out.insert(p);
                }
            }
            Ok(PrimeSet::Finite(out))
        }
    }
}

/// Result of analysing one `(spec, ell)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub spec: QuotientSpec,
    pub ell: u64,
    pub residues: BTreeSet<u64>,
    pub method: Method,
    /// Number of coefficients the decision was made from.
    pub precision: u64,
    /// Weight of the lifted form (0 when no lift was built).
    pub weight: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectionMode {
    Rigorous,
    Heuristic,
}

/// Default window for heuristic detection.
pub fn heuristic_window(ell: u64) -> u64 {
    50 * ell
}

fn check_override(given: Option<u64>, required: u64) -> Result<u64> {
    match given {
        Some(g) if g < required => Err(Error::PrecisionOverride { given: g, required }),
        Some(g) => Ok(g),
        None => Ok(required),
    }
}

fn heuristic_report(
    spec: &QuotientSpec,
    ell: u64,
    precision: u64,
    method: Method,
) -> Result<CongruenceReport> {
    let series = quotient_series(spec, ell, precision as i64)?;
    let weight = if ell >= 5 && lift_in_range(spec, ell) {
        lifted_weight(spec, ell) as u64
    } else {
        0
    };
    Ok(CongruenceReport {
        spec: *spec,
        ell,
        residues: heuristic_simple_congruences(&series, ell)?,
        method,
        precision,
        weight,
    })
}

/// Finds the simple congruences of `E2^r E4^s E6^t` mod `ell`.
///
/// In rigorous mode the quotient is replaced by its lift, theta-vanishing is
/// checked first, and otherwise the theta-power identity is certified for
/// both quadratic classes. Residue 0 is never flagged since `a(0) = 1`.
pub fn find_congruences(
    spec: &QuotientSpec,
    ell: u64,
    mode: DetectionMode,
    precision_override: Option<u64>,
) -> Result<CongruenceReport> {
    if !is_prime(ell) {
        return Err(Error::BadPrime(ell, 2));
    }
    if ell < 5 {
        return Ok(CongruenceReport {
            spec: *spec,
            ell,
            residues: (1..ell).collect(),
            method: Method::TrivialPrime,
            precision: 0,
            weight: 0,
        });
    }
    if mode == DetectionMode::Heuristic {
        let n = check_override(precision_override, heuristic_window(ell))?;
        return heuristic_report(spec, ell, n, Method::Heuristic);
    }
    if !lift_in_range(spec, ell) {
        let n = precision_override.unwrap_or(0).max(heuristic_window(ell));
        return heuristic_report(spec, ell, n, Method::BelowBoundBySize);
    }

    let weight = lifted_weight(spec, ell) as u64;
    let n = check_override(precision_override, rigorous_precision(weight, ell) + 1)?;
    let lift = replacement_lift(spec, ell, n as i64)?;
    let form = lift.form()?;
    debug_assert_eq!(form.series().coeff(0), Some(1));

    if form.theta().is_zero()? {
        if !theta_vanishing_prime_candidates(spec).contains(ell) {
            return Err(Error::PrecisionEscalation(ell));
        }
        return Ok(CongruenceReport {
            spec: *spec,
            ell,
            residues: (1..ell).collect(),
            method: Method::ThetaVanishing,
            precision: n,
            weight,
        });
    }
    Ok(CongruenceReport {
        spec: *spec,
        ell,
        residues: rigorous_simple_congruences(&form)?,
        method: Method::RigorousSturm,
        precision: n,
        weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::{eisenstein_product, eisenstein_series};

    fn spec(r: i64, s: i64, t: i64) -> QuotientSpec {
        QuotientSpec::new(r, s, t).unwrap()
    }

    #[test]
    fn legendre_matches_brute_force() {
        assert_eq!(legendre(0, 17), 0);
        assert_eq!(legendre(2, 17), 1);
        assert_eq!(legendre(3, 17), -1);
        for ell in [3u64, 5, 7, 11, 13, 17, 19, 23, 127] {
            let squares: BTreeSet<u64> = (1..ell).map(|x| x * x % ell).collect();
            for c in 1..ell {
                let expected = if squares.contains(&c) { 1 } else { -1 };
                assert_eq!(legendre(c as i64, ell), expected, "({c}/{ell})");
            }
        }
        assert_eq!(legendre(-1, 13), 1);
        assert_eq!(legendre(-1, 7), -1);
    }

    #[test]
    fn heuristic_examples() {
        let one = TruncatedSeries::one(5, 100).unwrap();
        assert_eq!(
            heuristic_simple_congruences(&one, 5).unwrap(),
            (1..5).collect::<BTreeSet<_>>()
        );
        let inv_e4 = eisenstein_product(0, -1, 0, 3, 300).unwrap();
        assert_eq!(
            heuristic_simple_congruences(&inv_e4, 3).unwrap(),
            BTreeSet::from([1, 2])
        );
        let inv_e4 = eisenstein_product(0, -1, 0, 9, 300).unwrap();
        assert_eq!(
            heuristic_simple_congruences(&inv_e4, 3).unwrap(),
            BTreeSet::from([1, 2])
        );
        let zero = TruncatedSeries::zero(7, 50).unwrap();
        assert_eq!(
            heuristic_simple_congruences(&zero, 7).unwrap(),
            (0..7).collect::<BTreeSet<_>>()
        );
        assert!(heuristic_simple_congruences(&zero, 5).is_err());
    }

    #[test]
    fn theta_vanishing_examples() {
        assert!(theta_vanishes(&spec(0, 1, 1), 11, 500).unwrap());
        assert!(theta_vanishes(&spec(144, -15, -14), 13, 500).unwrap());
        assert!(!theta_vanishes(&spec(0, 1, 1), 13, 500).unwrap());
        assert_eq!(spec(0, 1, 1).q_coefficient(), -264);
    }

    #[test]
    fn candidates() {
        let c = theta_vanishing_prime_candidates(&spec(0, 17, 34));
        assert!(c.contains(17));
        assert!(!c.contains(19));
        assert_eq!(
            theta_vanishing_prime_candidates(&spec(0, 0, 0)),
            PrimeSet::All
        );
        assert_eq!(
            confirmed_theta_vanishing_primes(&spec(0, 1, 1), 500).unwrap(),
            PrimeSet::Finite(BTreeSet::from([2, 3, 11]))
        );
    }

    #[test]
    fn rigorous_rejects_bad_input() {
        let f = ModularFormModEll::new(13, 4, eisenstein_series(4, 13, 5).unwrap()).unwrap();
        assert!(matches!(
            rigorous_simple_congruence(&f, 1),
            Err(Error::InsufficientPrecision { .. })
        ));
        assert!(matches!(
            rigorous_simple_congruence(&f, 0),
            Err(Error::ResidueOutOfRange(0, 13))
        ));
        let one = ModularFormModEll::new(13, 0, TruncatedSeries::one(13, 100).unwrap()).unwrap();
        assert!(matches!(
            rigorous_simple_congruence(&one, 2),
            Err(Error::ThetaVanishes(13))
        ));
    }

    #[test]
    fn fermat_cycle_for_e6_mod_11() {
        let e6 = eisenstein_series(6, 11, 200).unwrap();
        assert_eq!(e6.theta_pow(11), e6.theta());
    }

    #[test]
    fn tate_cycle_of_e4_mod_13() {
        let n = tate_cycle_precision(4, 13) as i64;
        let f = ModularFormModEll::new(13, 4, eisenstein_series(4, 13, n).unwrap()).unwrap();
        let p = tate_cycle(&f).unwrap();
        assert_eq!(p.base_filtration, 4);
        let first_high = p.high_points[0];
        for i in 1..first_high {
            assert_eq!(p.filtration_at(i + 1), p.filtration_at(i) + 14);
        }
        assert_eq!(p.filtration_at(1), 18);
        assert!(p.violations().is_empty(), "{:?}", p.violations());
    }

    #[test]
    fn method_names() {
        assert_eq!(
            serde_json::to_string(&Method::RigorousSturm).unwrap(),
            "\"rigorous-sturm\""
        );
        assert_eq!(Method::BelowBoundBySize.to_string(), "below-bound-by-size");
    }
}
