//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use eiscong::eisenstein::{lifted_weight, quotient_series, replacement_lift};
use eiscong::filtration::{filtration, sturm};
use eiscong::scanner::{table_rows, verify_table, verify_theorem, ScanOptions};
use eiscong::tate::{
    confirmed_theta_vanishing_primes, find_congruences, tate_cycle, tate_cycle_precision,
    theta_vanishes, DetectionMode, PrimeSet,
};
use eiscong::{Method, ModularFormModEll, QuotientSpec, TruncatedSeries};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn spec(r: i64, s: i64, t: i64) -> QuotientSpec {
    QuotientSpec::new(r, s, t).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn example_sweep() -> Outcome {
    let res =
        verify_theorem(&spec(0, -12, 1), &ScanOptions::default()).map_err(|e| e.to_string())?;
    ensure(res.bound == 129, format!("bound {}", res.bound))?;
    let flagged: Vec<u64> = res
        .primes_with_congruences()
        .into_iter()
        .filter(|&l| l >= 5)
        .collect();
    ensure(flagged == vec![17], format!("congruences at {flagged:?}"))?;
    let r17 = res.report_for(17).unwrap();
    let non_residues: BTreeSet<u64> = (1..17).filter(|&c| common::legendre(c, 17) == -1).collect();
    ensure(
        r17.residues == non_residues,
        format!("residues {:?}", r17.residues),
    )?;
    ensure(
        r17.method == Method::RigorousSturm,
        format!("method {}", r17.method),
    )?;
    Ok(format!(
        "only ell = 17 in [5, 129], residues {:?}",
        r17.residues
    ))
}

fn table_rows_hold() -> Outcome {
    let rows = table_rows();
    let mut failures = Vec::new();
    for row in &rows {
        if let Err(e) = verify_table(std::slice::from_ref(row), 3000) {
            failures.push(e.to_string());
        }
    }
    if failures.is_empty() {
        Ok(format!("{} entries hold through 3000 terms", rows.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn e4e6_vanishes_mod_11() -> Outcome {
    let sp = spec(0, 1, 1);
    ensure(
        theta_vanishes(&sp, 11, 1000).unwrap(),
        "theta(E4 E6) is nonzero mod 11",
    )?;
    // independent expansion
    let prod = common::mul(
        &common::eisenstein_mod(4, 11, 1000),
        &common::eisenstein_mod(6, 11, 1000),
        11,
    );
    ensure(
        prod.iter().enumerate().all(|(n, &a)| a == 0 || n % 11 == 0),
        "oracle expansion disagrees",
    )?;
    let confirmed = confirmed_theta_vanishing_primes(&sp, 1000).unwrap();
    ensure(
        confirmed == PrimeSet::Finite([2, 3, 11].into()),
        format!("confirmed {confirmed:?}"),
    )?;
    Ok("theta vanishes mod 11 through 1000 terms; confirmed {2, 3, 11}".into())
}

fn big_quotient_vanishes() -> Outcome {
    let sp = spec(144, -15, -14);
    for p in [5u64, 7, 13] {
        ensure(
            theta_vanishes(&sp, p, 1000).unwrap(),
            format!("theta is nonzero mod {p}"),
        )?;
    }
    let confirmed = confirmed_theta_vanishing_primes(&sp, 1000).unwrap();
    ensure(
        confirmed == PrimeSet::Finite([2, 3, 5, 7, 13].into()),
        format!("confirmed {confirmed:?}"),
    )?;
    Ok("theta vanishes mod 5, 7, 13 through 1000 terms; confirmed {2, 3, 5, 7, 13}".into())
}

fn eisenstein_filtrations() -> Outcome {
    let mut checked = 0;
    for ell in [13u64, 17, 19, 23] {
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    if (a, b, c) == (0, 0, 0) {
                        continue;
                    }
                    let w = a as u64 * (ell + 1) + 4 * b as u64 + 6 * c as u64;
                    let len = sturm(w) as usize + 2;
                    let coeffs = common::mul(
                        &common::mul(
                            &common::pow(
                                &common::eisenstein_mod(ell as usize + 1, ell, len),
                                a,
                                ell,
                            ),
                            &common::pow(&common::eisenstein_mod(4, ell, len), b, ell),
                            ell,
                        ),
                        &common::pow(&common::eisenstein_mod(6, ell, len), c, ell),
                        ell,
                    );
                    let f = ModularFormModEll::new(
                        ell,
                        w,
                        TruncatedSeries::new(ell, 0, coeffs).unwrap(),
                    )
                    .unwrap();
                    let got = filtration(&f).map_err(|e| e.to_string())?;
                    ensure(got == w, format!("ell={ell} ({a},{b},{c}): {got} != {w}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} monomials at their expected filtration"))
}

fn tate_cycle_mod_17() -> Outcome {
    let sp = spec(0, -12, 1);
    let weight = lifted_weight(&sp, 17) as u64;
    let n = tate_cycle_precision(weight, 17) as i64;
    let form = replacement_lift(&sp, 17, n).unwrap().form().unwrap();
    let cycle = tate_cycle(&form).map_err(|e| e.to_string())?;
    ensure(
        cycle.low_points.len() == 2,
        format!("low points {:?}", cycle.low_points),
    )?;
    ensure(
        cycle.falls == vec![9, 9],
        format!("falls {:?}", cycle.falls),
    )?;
    for &low in &cycle.low_points {
        let w = cycle.filtration_at(low);
        ensure(w % 17 == 10, format!("low point {low} has filtration {w}"))?;
    }
    Ok(format!(
        "low points {:?}, falls {:?}, filtrations {:?}",
        cycle.low_points,
        cycle.falls,
        cycle
            .low_points
            .iter()
            .map(|&i| cycle.filtration_at(i))
            .collect::<Vec<_>>()
    ))
}

fn coefficient_formulas() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(1729);
    for _ in 0..200 {
        let (r, s, t) = (
            rng.gen_range(0..50i64),
            rng.gen_range(-50..50i64),
            rng.gen_range(-50..50i64),
        );
        let (ri, si, ti) = (r as i128, s as i128, t as i128);
        let c1 = -24 * ri + 240 * si - 504 * ti;
        let c2 = 288 * ri * ri - 5760 * ri * si + 12096 * ri * ti - 360 * ri + 28800 * si * si
            - 120960 * si * ti
            - 26640 * si
            + 127008 * ti * ti
            - 143640 * ti;
        ensure(
            common::quotient_low_coefficients(r, s, t) == (c1, c2),
            format!("closed form disagrees with direct expansion at ({r},{s},{t})"),
        )?;
        for p in [5u64, 7, 11, 13, 17, 19, 23, 1_000_003] {
            let f = quotient_series(&spec(r, s, t), p, 3).unwrap();
            let want = (
                c1.rem_euclid(p as i128) as u64,
                c2.rem_euclid(p as i128) as u64,
            );
            let got = (f.coeff(1).unwrap(), f.coeff(2).unwrap());
            ensure(
                got == want,
                format!("({r},{s},{t}) mod {p}: {got:?} != {want:?}"),
            )?;
        }
    }
    Ok("200 random exponent triples match mod 8 moduli".into())
}

fn heuristic_rigorous_agreement() -> Outcome {
    let specs = [
        (0, -1, 0),
        (0, 0, -1),
        (1, -1, 0),
        (1, 0, -1),
        (0, 1, -1),
        (2, 0, -1),
    ];
    let mut pairs = 0;
    for (r, s, t) in specs {
        let sp = spec(r, s, t);
        for ell in common::primes(5, 37) {
            let rig = find_congruences(&sp, ell, DetectionMode::Rigorous, None)
                .map_err(|e| e.to_string())?;
            let heu = find_congruences(&sp, ell, DetectionMode::Heuristic, Some(50 * ell))
                .map_err(|e| e.to_string())?;
            let heu_nonzero: BTreeSet<u64> =
                heu.residues.iter().copied().filter(|&c| c != 0).collect();
            ensure(
                rig.residues == heu_nonzero,
                format!(
                    "{sp} mod {ell}: rigorous {:?}, window {:?}",
                    rig.residues, heu_nonzero
                ),
            )?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (spec, prime) pairs agree"))
}

fn series_properties() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(9);
    let moduli = [5u64, 7, 11, 13, 17, 31];
    let random = |rng: &mut rand::rngs::StdRng, p: u64| {
        let len = rng.gen_range(1..30);
        let v = rng.gen_range(-3..4);
        TruncatedSeries::new(p, v, (0..len).map(|_| rng.gen_range(0..p)).collect()).unwrap()
    };
    let same = |a: &TruncatedSeries, b: &TruncatedSeries| {
        let n = a.precision().min(b.precision());
        a.truncate(n) == b.truncate(n)
    };
    for case in 0..1000 {
        let p = moduli[rng.gen_range(0..moduli.len())];
        let (f, g, h) = (
            random(&mut rng, p),
            random(&mut rng, p),
            random(&mut rng, p),
        );
        let fg = f.mul(&g).unwrap();
        ensure(
            same(&fg, &g.mul(&f).unwrap()),
            format!("case {case}: commutativity"),
        )?;
        ensure(
            same(&fg.mul(&h).unwrap(), &f.mul(&g.mul(&h).unwrap()).unwrap()),
            format!("case {case}: associativity"),
        )?;
        ensure(
            same(
                &f.mul(&g.add(&h).unwrap()).unwrap(),
                &fg.add(&f.mul(&h).unwrap()).unwrap(),
            ),
            format!("case {case}: distributivity"),
        )?;
        let rule = f
            .theta()
            .mul(&g)
            .unwrap()
            .add(&f.mul(&g.theta()).unwrap())
            .unwrap();
        ensure(
            same(&fg.theta(), &rule),
            format!("case {case}: product rule"),
        )?;
        let poly: Vec<i64> = (0..rng.gen_range(1..6))
            .map(|_| rng.gen_range(-20..20))
            .collect();
        let fp = TruncatedSeries::polynomial(p, &poly, 8 * p as i64)
            .unwrap()
            .pow(p as i64)
            .unwrap();
        ensure(
            fp.terms().all(|(n, a)| a == 0 || n % p as i64 == 0),
            format!("case {case}: Frobenius"),
        )?;
        ensure(
            f.theta_pow(p) == f.theta(),
            format!("case {case}: Fermat cycle"),
        )?;
    }
    Ok("1000 random cases".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example sweep E6/E4^12 to 129", example_sweep),
        ("Eisenstein quotient table, 3000 terms", table_rows_hold),
        ("theta(E4 E6) vanishes mod 11", e4e6_vanishes_mod_11),
        (
            "theta(E2^144 E4^-15 E6^-14) vanishes mod 5, 7, 13",
            big_quotient_vanishes,
        ),
        (
            "filtration of E_(ell+1)^a E4^b E6^c",
            eisenstein_filtrations,
        ),
        ("Tate cycle of the certified form mod 17", tate_cycle_mod_17),
        ("q and q^2 coefficient formulas", coefficient_formulas),
        ("window and certificate agree", heuristic_rigorous_agreement),
        ("series ring properties", series_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
