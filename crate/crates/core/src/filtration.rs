//! Reductions of level-one modular forms mod `ell`, written in the monomial
//! basis `E4^a E6^b`, and the filtration (least weight of a congruent form).
//!
//! Equality of two reductions is decided on the first `sturm(w) + 1`
//! coefficients, where `w` is the larger of the two weights after padding
//! the smaller by powers of `E_{ell-1} = 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eisenstein::eisenstein_series;
use crate::error::{Error, Result};
use crate::linalg::solve_mod_p;
use crate::modular::is_prime;
use crate::series::TruncatedSeries;

/// Level-one Sturm bound `floor(w / 12)`.
pub fn sturm(weight: u64) -> u64 {
    weight / 12
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 5 || !is_prime(ell) {
        return Err(Error::BadPrime(ell, 5));
    }
    Ok(())
}

fn check_weight(weight: u64) -> Result<()> {
    if !weight.is_multiple_of(2) {
        return Err(Error::InvalidWeight(weight as i64));
    }
    Ok(())
}

/// The reduction mod `ell` of a weight-`weight` level-one form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularFormModEll {
    ell: u64,
    weight: u64,
    series: TruncatedSeries,
}

impl ModularFormModEll {
    pub fn new(ell: u64, weight: u64, series: TruncatedSeries) -> Result<Self> {
        check_ell(ell)?;
        check_weight(weight)?;
        if series.modulus() != ell {
            return Err(Error::ModulusMismatch {
                left: series.modulus(),
                right: ell,
            });
        }
        if series.valuation() < 0 && !series.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "a modular form has no negative powers of q (valuation {})",
                series.valuation()
            )));
        }
        Ok(Self {
            ell,
            weight,
            series,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn precision(&self) -> i64 {
        self.series.precision()
    }

    /// Errors unless at least `needed` coefficients are known.
    pub fn require_precision(&self, needed: u64) -> Result<()> {
        if self.series.precision() < needed as i64 {
            return Err(Error::InsufficientPrecision {
                needed: needed as i64,
                available: self.series.precision(),
            });
        }
        Ok(())
    }

    /// Decides `f = 0 mod ell` from the first `sturm(k) + 1` coefficients.
    pub fn is_zero(&self) -> Result<bool> {
        let n = sturm(self.weight) + 1;
        self.require_precision(n)?;
        Ok((0..n as i64).all(|i| self.series.coeff(i) == Some(0)))
    }

    /// `theta f`, a form of weight `k + ell + 1`.
    pub fn theta(&self) -> Self {
        self.theta_pow(1)
    }

    /// `theta^i f`, tagged with weight `k + i (ell + 1)`.
    pub fn theta_pow(&self, i: u64) -> Self {
        Self {
            ell: self.ell,
            weight: self.weight + i * (self.ell + 1),
            series: self.series.theta_pow(i),
        }
    }

    /// The same reduction viewed at another weight; the caller has
    /// established that it is congruent to a form of that weight.
    pub(crate) fn retagged(&self, weight: u64) -> Self {
        Self {
            weight,
            ..self.clone()
        }
    }
}

/// A polynomial in `Q` (weight 4) and `R` (weight 6) over `F_ell` whose
/// monomials all have the same weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsobaricPolynomial {
    ell: u64,
    weight: u64,
    /// Nonzero coefficients keyed by `(a, b)` for the monomial `Q^a R^b`.
    coeffs: BTreeMap<(u64, u64), u64>,
}

impl IsobaricPolynomial {
    pub fn new(
        ell: u64,
        weight: u64,
        terms: impl IntoIterator<Item = ((u64, u64), u64)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for ((a, b), c) in terms {
            if 4 * a + 6 * b != weight {
                return Err(Error::InvalidArgument(format!(
                    "monomial Q^{a} R^{b} does not have weight {weight}"
                )));
            }
            let c = c % ell;
            if c != 0 {
                coeffs.insert((a, b), c);
            }
        }
        Ok(Self {
            ell,
            weight,
            coeffs,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn coeff(&self, a: u64, b: u64) -> u64 {
        self.coeffs.get(&(a, b)).copied().unwrap_or(0)
    }

    /// `(a, b, coefficient)` triples in increasing `(a, b)` order.
    pub fn terms(&self) -> Vec<(u64, u64, u64)> {
        self.coeffs.iter().map(|(&(a, b), &c)| (a, b, c)).collect()
    }

    /// Evaluates at `Q = E4`, `R = E6`.
    pub fn evaluate(&self, precision: i64) -> Result<TruncatedSeries> {
        let mut basis = MonomialCache::new(self.ell, precision)?;
        let mut acc = TruncatedSeries::zero(self.ell, precision)?;
        for (&(a, b), &c) in &self.coeffs {
            acc = acc.add(&basis.monomial(a, b)?.scale(c))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for IsobaricPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest power of Q first
        for (&(a, b), &c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if c != 1 || (a == 0 && b == 0) {
                parts.push(c.to_string());
            }
            match a {
                0 => {}
                1 => parts.push("Q".into()),
                _ => parts.push(format!("Q^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("R".into()),
                _ => parts.push(format!("R^{b}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Exponent pairs `(a, b)` with `4a + 6b = w`, ordered by increasing `b`.
pub fn monomial_pairs(weight: u64) -> Vec<(u64, u64)> {
    (0..=weight / 6)
        .filter(|&b| (weight - 6 * b).is_multiple_of(4))
        .map(|b| ((weight - 6 * b) / 4, b))
        .collect()
}

/// Powers of `E4` and `E6` mod `ell` at one precision, grown on demand.
struct MonomialCache {
    precision: i64,
    e4: TruncatedSeries,
    e6: TruncatedSeries,
    e4_powers: Vec<TruncatedSeries>,
    e6_powers: Vec<TruncatedSeries>,
}

impl MonomialCache {
    fn new(ell: u64, precision: i64) -> Result<Self> {
        let one = TruncatedSeries::one(ell, precision)?;
        Ok(Self {
            precision,
            e4: eisenstein_series(4, ell, precision)?,
            e6: eisenstein_series(6, ell, precision)?,
            e4_powers: vec![one.clone()],
            e6_powers: vec![one],
        })
    }

    fn power(
        powers: &mut Vec<TruncatedSeries>,
        base: &TruncatedSeries,
        e: usize,
    ) -> Result<TruncatedSeries> {
        while powers.len() <= e {
            let next = powers.last().expect("seeded with 1").mul(base)?;
            powers.push(next);
        }
        Ok(powers[e].clone())
    }

    fn monomial(&mut self, a: u64, b: u64) -> Result<TruncatedSeries> {
        let qa = Self::power(&mut self.e4_powers, &self.e4, a as usize)?;
        let rb = Self::power(&mut self.e6_powers, &self.e6, b as usize)?;
        qa.mul(&rb)
    }
}

/// The monomials `E4^a E6^b` of weight `w` mod `ell`, to `precision`.
pub fn monomial_basis(
    weight: u64,
    ell: u64,
    precision: i64,
) -> Result<Vec<((u64, u64), TruncatedSeries)>> {
    check_ell(ell)?;
    check_weight(weight)?;
    let mut cache = MonomialCache::new(ell, precision)?;
    monomial_pairs(weight)
        .into_iter()
        .map(|(a, b)| Ok(((a, b), cache.monomial(a, b)?)))
        .collect()
}

/// Writes `f` as an isobaric polynomial of weight `w` in `E4`, `E6`, or
/// returns `None` when no weight-`w` form is congruent to `f`.
pub fn represent(f: &ModularFormModEll, weight: u64) -> Result<Option<IsobaricPolynomial>> {
    let mut cache = MonomialCache::new(f.ell, 0)?;
    represent_with(f, weight, &mut cache)
}

fn represent_with(
    f: &ModularFormModEll,
    weight: u64,
    cache: &mut MonomialCache,
) -> Result<Option<IsobaricPolynomial>> {
    check_weight(weight)?;
    let ell = f.ell;
    if !weight.abs_diff(f.weight).is_multiple_of(ell - 1) {
        return Err(Error::WeightClassMismatch {
            requested: weight,
            weight: f.weight,
            modulus: ell - 1,
        });
    }
    let rows = sturm(weight.max(f.weight)) + 1;
    f.require_precision(rows)?;
    if cache.precision < rows as i64 {
        *cache = MonomialCache::new(ell, rows as i64)?;
    }

    let pairs = monomial_pairs(weight);
    let mut columns = Vec::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        columns.push(cache.monomial(a, b)?);
    }
    let matrix: Vec<Vec<u64>> = (0..rows as i64)
        .map(|n| columns.iter().map(|c| c.coeff(n).unwrap_or(0)).collect())
        .collect();
    let rhs: Vec<u64> = (0..rows as i64)
        .map(|n| f.series.coeff(n).unwrap_or(0))
        .collect();

    Ok(match solve_mod_p(&matrix, &rhs, ell) {
        Some(x) => Some(IsobaricPolynomial::new(
            ell,
            weight,
            pairs.into_iter().zip(x),
        )?),
        None => None,
    })
}

/// The least weight `w >= 0`, `w = k mod (ell - 1)`, at which `f` is
/// congruent to a modular form.
pub fn filtration(f: &ModularFormModEll) -> Result<u64> {
    if f.is_zero()? {
        return Err(Error::ZeroForm(f.ell));
    }
    let step = f.ell - 1;
    let mut cache = MonomialCache::new(f.ell, 0)?;
    if represent_with(f, f.weight, &mut cache)?.is_none() {
        return Err(Error::NoFiltration {
            weight: f.weight,
            ell: f.ell,
        });
    }
    // representable at w implies representable at w + (ell - 1) (multiply by E_{ell-1})
    let mut w = f.weight;
    while w >= step && represent_with(f, w - step, &mut cache)?.is_some() {
        w -= step;
    }
    Ok(w)
}

/// `f` re-tagged at its filtration, together with that weight.
pub fn lower_to_filtration(f: &ModularFormModEll) -> Result<(u64, ModularFormModEll)> {
    let w = filtration(f)?;
    Ok((w, f.retagged(w)))
}

/// The weight-`(ell-1)` polynomial with `A(E4, E6) = 1 mod ell`.
pub fn compute_a_tilde(ell: u64) -> Result<IsobaricPolynomial> {
    check_ell(ell)?;
    let weight = ell - 1;
    let n = sturm(weight) as i64 + 1;
    let one = ModularFormModEll::new(ell, weight, TruncatedSeries::one(ell, n)?)?;
    represent(&one, weight)?.ok_or(Error::NoFiltration { weight, ell })
}

/// The weight-`(ell+1)` polynomial with `B(E4, E6) = E2 mod ell`.
pub fn compute_b_tilde(ell: u64) -> Result<IsobaricPolynomial> {
    check_ell(ell)?;
    let weight = ell + 1;
    let n = sturm(weight) as i64 + 1;
    let e2 = ModularFormModEll::new(ell, weight, eisenstein_series(2, ell, n)?)?;
    represent(&e2, weight)?.ok_or(Error::NoFiltration { weight, ell })
}
