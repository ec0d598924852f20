use std::fmt::Write;

use eiscong::scanner::{CacheRecord, ScanResult, TableCheck, TableRow};
use eiscong::{
    CongruenceReport, IsobaricPolynomial, QuotientSpec, TateCycleProfile, TruncatedSeries,
};
use serde_json::{json, Value};

use crate::OutputFormat;

/// A passing check, or the first `(n, a(n) mod m)` that fails.
pub type RowOutcome = Result<TableCheck, (u64, u64)>;

/// Outcome of a command, ready to print in any output format.
pub enum Report {
    Series {
        label: String,
        series: TruncatedSeries,
    },
    Filtration {
        spec: QuotientSpec,
        ell: u64,
        weight: u64,
        filtration: u64,
        precision: u64,
    },
    Cycle {
        spec: QuotientSpec,
        profile: TateCycleProfile,
    },
    Congruences {
        report: CongruenceReport,
        bound: u64,
    },
    Scan(Box<ScanResult>),
    Table {
        terms: u64,
        outcomes: Vec<(TableRow, RowOutcome)>,
    },
    Polynomial {
        name: &'static str,
        poly: IsobaricPolynomial,
    },
}

fn residues(set: impl IntoIterator<Item = u64>) -> String {
    let v: Vec<String> = set.into_iter().map(|c| c.to_string()).collect();
    format!("[{}]", v.join(", "))
}

fn csv_residues(set: impl IntoIterator<Item = u64>) -> String {
    let v: Vec<String> = set.into_iter().map(|c| c.to_string()).collect();
    v.join(" ")
}

fn spec_json(spec: &QuotientSpec) -> Value {
    json!({ "r": spec.r(), "s": spec.s(), "t": spec.t() })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn record_csv_header() -> &'static str {
    "r,s,t,ell,method,residues,weight,precision,bound,version\n"
}

fn record_csv(rec: &CacheRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}\n",
        rec.r,
        rec.s,
        rec.t,
        rec.ell,
        rec.method,
        csv_residues(rec.residues.iter().copied()),
        rec.weight,
        rec.precision,
        rec.bound,
        rec.version
    )
}

impl Report {
    /// Whether the report exhibits a counterexample to a claimed congruence.
    pub fn is_counterexample(&self) -> bool {
        match self {
            Report::Table { outcomes, .. } => outcomes.iter().any(|(_, o)| o.is_err()),
            Report::Scan(scan) => !scan.above_bound_violations().is_empty(),
            _ => false,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.table(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.csv(),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Series { series, .. } => {
                writeln!(out, "{series}").unwrap();
            }
            Report::Filtration {
                spec,
                ell,
                weight,
                filtration,
                precision,
            } => {
                writeln!(
                    out,
                    "lift of {spec} mod {ell}: weight {weight}, filtration {filtration}"
                )
                .unwrap();
                writeln!(out, "({precision} coefficients)").unwrap();
            }
            Report::Cycle { spec, profile } => {
                let (a, b) = profile.quotient_remainder();
                writeln!(
                    out,
                    "Tate cycle of the lift of {spec} mod {}: weight {}, filtration {} = {a}*{} + {b}",
                    profile.ell, profile.weight, profile.base_filtration, profile.ell
                )
                .unwrap();
                writeln!(out, "{:>4}  {:>8}  {:<5}  fall", "i", "omega", "mark").unwrap();
                for i in 1..profile.ell {
                    let w = profile.filtration_at(i);
                    let high = profile.high_points.contains(&i);
                    let low = profile.low_points.iter().position(|&l| l == i);
                    let mark = match (high, low.is_some()) {
                        (true, true) => "high/low",
                        (true, false) => "high",
                        (false, true) => "low",
                        _ => "",
                    };
                    let fall = low
                        .map(|k| profile.falls[k].to_string())
                        .unwrap_or_default();
                    writeln!(out, "{i:>4}  {w:>8}  {mark:<5}  {fall}").unwrap();
                }
                for v in profile.violations() {
                    writeln!(out, "warning: {v}").unwrap();
                }
            }
            Report::Congruences { report, .. } => {
                writeln!(
                    out,
                    "{} mod {}: residues {} ({}, {} coefficients, weight {})",
                    report.spec,
                    report.ell,
                    residues(report.residues.iter().copied()),
                    report.method,
                    report.precision,
                    report.weight
                )
                .unwrap();
            }
            Report::Scan(scan) => {
                writeln!(
                    out,
                    "{}: theorem bound {}, remark bound {}; scanned to {}",
                    scan.spec, scan.theorem_bound, scan.remark_bound, scan.bound
                )
                .unwrap();
                writeln!(out, "{:>6}  {:<20}  residues", "ell", "method").unwrap();
                for r in &scan.reports {
                    if !r.residues.is_empty() {
                        writeln!(
                            out,
                            "{:>6}  {:<20}  {}",
                            r.ell,
                            r.method,
                            residues(r.residues.iter().copied())
                        )
                        .unwrap();
                    }
                }
                writeln!(
                    out,
                    "primes <= {} with congruences: {}",
                    scan.bound,
                    residues(scan.primes_with_congruences())
                )
                .unwrap();
                for r in &scan.above_bound {
                    let status = if r.residues.is_empty() || scan.spec.is_trivial() {
                        "none found (consistent with the bound)".to_string()
                    } else {
                        format!(
                            "CONGRUENCE ABOVE BOUND at {}",
                            residues(r.residues.iter().copied())
                        )
                    };
                    writeln!(out, "sample ell = {} ({}): {status}", r.ell, r.method).unwrap();
                }
                writeln!(
                    out,
                    "{} primes computed, {} from cache",
                    scan.computed, scan.cache_hits
                )
                .unwrap();
            }
            Report::Table { terms, outcomes } => {
                for (row, o) in outcomes {
                    let claim = format!(
                        "{:<8} a(n) = 0 mod {:<4} for n = {} mod {}",
                        row.name, row.modulus, row.residue, row.step
                    );
                    match o {
                        Ok(check) => writeln!(
                            out,
                            "{claim}: ok ({} coefficients below {terms})",
                            check.checked
                        )
                        .unwrap(),
                        Err((n, v)) => writeln!(
                            out,
                            "{claim}: FAILS at n = {n} (a(n) = {v} mod {})",
                            row.modulus
                        )
                        .unwrap(),
                    }
                }
            }
            Report::Polynomial { name, poly } => {
                writeln!(
                    out,
                    "{name}(Q, R) = {poly} mod {} (weight {})",
                    poly.ell(),
                    poly.weight()
                )
                .unwrap();
                for (a, b, c) in poly.terms() {
                    writeln!(out, "({a}, {b}, {c})").unwrap();
                }
            }
        }
        out
    }

    fn json(&self) -> Value {
        match self {
            Report::Series { label, series } => json!({
                "label": label,
                "modulus": series.modulus(),
                "valuation": series.valuation(),
                "precision": series.precision(),
                "coefficients": series.coeffs(),
            }),
            Report::Filtration {
                spec,
                ell,
                weight,
                filtration,
                precision,
            } => merge(
                spec_json(spec),
                json!({ "ell": ell, "weight": weight, "filtration": filtration, "precision": precision }),
            ),
            Report::Cycle { spec, profile } => {
                let (a, b) = profile.quotient_remainder();
                merge(
                    merge(
                        spec_json(spec),
                        serde_json::to_value(profile).expect("profile serializes"),
                    ),
                    json!({ "quotient": a, "remainder": b, "violations": profile.violations() }),
                )
            }
            Report::Congruences { report, bound } => {
                serde_json::to_value(CacheRecord::from_report(report, *bound))
                    .expect("record serializes")
            }
            Report::Scan(scan) => merge(
                spec_json(&scan.spec),
                json!({
                    "bound_kind": scan.bound_kind,
                    "theorem_bound": scan.theorem_bound,
                    "remark_bound": scan.remark_bound,
                    "bound": scan.bound,
                    "primes_with_congruences": scan.primes_with_congruences(),
                    "records": scan.reports.iter().map(|r| CacheRecord::from_report(r, scan.bound)).collect::<Vec<_>>(),
                    "above_bound": scan.above_bound.iter().map(|r| CacheRecord::from_report(r, scan.bound)).collect::<Vec<_>>(),
                    "above_bound_violations": scan.above_bound_violations().iter().map(|r| r.ell).collect::<Vec<_>>(),
                    "computed": scan.computed,
                    "cache_hits": scan.cache_hits,
                    "version": scan.version,
                }),
            ),
            Report::Table { terms, outcomes } => Value::Array(
                outcomes
                    .iter()
                    .map(|(row, o)| {
                        let mut v = json!({
                            "row": row.name,
                            "step": row.step,
                            "residue": row.residue,
                            "modulus": row.modulus,
                            "terms": terms,
                            "holds": o.is_ok(),
                        });
                        match o {
                            Ok(check) => v["checked"] = json!(check.checked),
                            Err((n, a)) => v["counterexample"] = json!({ "n": n, "value": a }),
                        }
                        v
                    })
                    .collect(),
            ),
            Report::Polynomial { name, poly } => json!({
                "polynomial": name,
                "ell": poly.ell(),
                "weight": poly.weight(),
                "terms": poly.terms().iter().map(|&(a, b, c)| json!([a, b, c])).collect::<Vec<_>>(),
            }),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Series { series, .. } => {
                out.push_str("n,coefficient\n");
                for (n, a) in series.terms() {
                    writeln!(out, "{n},{a}").unwrap();
                }
            }
            Report::Filtration {
                spec,
                ell,
                weight,
                filtration,
                precision,
            } => {
                out.push_str("r,s,t,ell,weight,filtration,precision\n");
                writeln!(
                    out,
                    "{},{},{},{ell},{weight},{filtration},{precision}",
                    spec.r(),
                    spec.s(),
                    spec.t()
                )
                .unwrap();
            }
            Report::Cycle { profile, .. } => {
                out.push_str("i,filtration,high,low,fall\n");
                for i in 1..profile.ell {
                    let low = profile.low_points.iter().position(|&l| l == i);
                    writeln!(
                        out,
                        "{i},{},{},{},{}",
                        profile.filtration_at(i),
                        profile.high_points.contains(&i),
                        low.is_some(),
                        low.map(|k| profile.falls[k].to_string())
                            .unwrap_or_default()
                    )
                    .unwrap();
                }
            }
            Report::Congruences { report, bound } => {
                out.push_str(record_csv_header());
                out.push_str(&record_csv(&CacheRecord::from_report(report, *bound)));
            }
            Report::Scan(scan) => {
                out.push_str(record_csv_header());
                for rec in scan.records() {
                    out.push_str(&record_csv(&rec));
                }
            }
            Report::Table { terms, outcomes } => {
                out.push_str(
                    "row,step,residue,modulus,terms,holds,counterexample_n,counterexample_value\n",
                );
                for (row, o) in outcomes {
                    let (n, v) = match o {
                        Ok(_) => (String::new(), String::new()),
                        Err((n, v)) => (n.to_string(), v.to_string()),
                    };
                    writeln!(
                        out,
                        "{},{},{},{},{terms},{},{n},{v}",
                        row.name,
                        row.step,
                        row.residue,
                        row.modulus,
                        o.is_ok()
                    )
                    .unwrap();
                }
            }
            Report::Polynomial { poly, .. } => {
                out.push_str("a,b,coefficient\n");
                for (a, b, c) in poly.terms() {
                    writeln!(out, "{a},{b},{c}").unwrap();
                }
            }
        }
        out
    }
}
