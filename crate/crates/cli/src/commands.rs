//! Subcommand bodies. Each returns the rendered document and an exit code.

use std::fmt::Write as _;
use std::path::Path;

use lct_core::newton::MAX_EXACT_DIM;
use lct_core::oracle::{self, OracleConfig};
use lct_core::{Error, InvariantConfig, Kind};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::instance::{self, Instance};
use crate::report::{self, Document, InstanceReport, FORMAT_TAG};
use crate::suite::{self, RandomSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_DEFECT: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub format: Format,
    pub invariants: InvariantConfig,
    pub oracle: OracleConfig,
}

/// Rendered output plus process exit code. `message` goes to stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub message: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn fail(code: i32, message: String) -> Self {
        Outcome {
            output: String::new(),
            message: Some(message),
            code,
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::DimensionTooLarge { .. } | Error::Unsupported(_) | Error::NotPrimary => EXIT_UNSUPPORTED,
        _ => EXIT_OTHER,
    }
}

fn load_sorted(path: &Path) -> Result<Vec<Instance>, Outcome> {
    let mut items = instance::load(path).map_err(|e| Outcome::fail(EXIT_PARSE, e.to_string()))?;
    items.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(items)
}

/// Full report for every instance in the file, with the oracle summary when
/// `n <= 3`.
pub fn analyze(path: &Path, opts: &Options) -> Outcome {
    let items = match load_sorted(path) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if let Some(bad) = items.iter().find(|i| i.input.n() > MAX_EXACT_DIM) {
        return Outcome::fail(
            EXIT_UNSUPPORTED,
            format!("{}: dimension {} exceeds {MAX_EXACT_DIM}", bad.label, bad.input.n()),
        );
    }
    let mut reports: Vec<InstanceReport> = Vec::with_capacity(items.len());
    for item in &items {
        match report::build(item, &opts.invariants, Some(&opts.oracle)) {
            Ok((r, _)) => reports.push(r),
            Err(e) => return Outcome::fail(error_code(&e), format!("{}: {e}", item.label)),
        }
    }
    let defects: usize = reports.iter().map(|r| r.defects.len()).sum();
    let output = match opts.format {
        Format::Json => json(&Document {
            format: FORMAT_TAG,
            instances: reports,
        }),
        Format::Text => report::render_text(&reports),
    };
    Outcome {
        output,
        message: (defects > 0).then(|| format!("{defects} defect(s) found")),
        code: if defects > 0 { EXIT_DEFECT } else { EXIT_OK },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub label: String,
    pub quantity: &'static str,
    pub exact: String,
    pub oracle: String,
    pub relative_error: f64,
    pub within_tolerance: bool,
}

/// Side-by-side exact values and oracle estimates: the regularized `e_n`
/// against the colength count, and `1/c` against the bisection interval.
pub fn compare(path: &Path, opts: &Options) -> Outcome {
    let items = match load_sorted(path) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if let Some(bad) = items
        .iter()
        .find(|i| i.input.n() > oracle::MAX_ORACLE_DIM || i.input.kind() != Kind::Ideal)
    {
        return Outcome::fail(
            EXIT_UNSUPPORTED,
            format!(
                "{}: compare needs an ideal with n <= {} (got {} with n = {})",
                bad.label,
                oracle::MAX_ORACLE_DIM,
                bad.input.kind().as_str(),
                bad.input.n()
            ),
        );
    }
    let mut rows = Vec::new();
    for item in &items {
        let built = report::build(item, &opts.invariants, Some(&opts.oracle));
        let o = match built {
            Ok((r, _)) => r.oracle.expect("oracle runs for n <= 3"),
            Err(e) => return Outcome::fail(error_code(&e), format!("{}: {e}", item.label)),
        };
        rows.push(CompareRow {
            label: item.label.clone(),
            quantity: "e_n",
            exact: o.exact.clone(),
            oracle: o.estimate.clone(),
            relative_error: o.relative_error,
            within_tolerance: o.within_tolerance,
        });
        let lo = lct_core::parse_rational(&o.lct_interval[0]).expect("own output");
        let hi = lct_core::parse_rational(&o.lct_interval[1]).expect("own output");
        let inverse = lct_core::parse_rational(&o.inverse_lct).expect("own output");
        let mid = (&lo + &hi) / lct_core::Rational::from_integer(2.into());
        let err = oracle::relative_error(&mid, &inverse);
        rows.push(CompareRow {
            label: item.label.clone(),
            quantity: "1/c",
            exact: o.inverse_lct.clone(),
            oracle: format!("[{}, {}]", o.lct_interval[0], o.lct_interval[1]),
            relative_error: err.to_f64().unwrap_or(f64::NAN),
            within_tolerance: o.interval_contains_exact,
        });
    }
    let output = match opts.format {
        Format::Json => json(&Document {
            format: FORMAT_TAG,
            instances: rows,
        }),
        Format::Text => {
            let mut s = format!(
                "{:<24} {:<8} {:>14} {:>22} {:>10}  ok\n",
                "label", "quantity", "exact", "oracle", "rel.err"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<24} {:<8} {:>14} {:>22} {:>10.6}  {}",
                    r.label, r.quantity, r.exact, r.oracle, r.relative_error, r.within_tolerance
                );
            }
            s
        }
    };
    Outcome {
        output,
        message: None,
        code: EXIT_OK,
    }
}

/// Seeded corpus plus property-suite summary. Exit code 4 if the suite
/// found a defect; oracle disagreements are reported but do not fail.
pub fn random(plan: &RandomSpec, opts: &Options, with_oracle: bool) -> Outcome {
    let oracle_cfg = with_oracle.then_some(&opts.oracle);
    let summary = match suite::random(plan, &opts.invariants, oracle_cfg) {
        Ok(s) => s,
        Err(m) => return Outcome::fail(EXIT_UNSUPPORTED, m),
    };
    let clean = summary.is_clean();
    let output = match opts.format {
        Format::Json => json(&summary),
        Format::Text => {
            let t = &summary.tally;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "seed {} n = {} gens <= {} exp <= {} count {}{}",
                summary.seed,
                summary.n,
                summary.max_gens,
                summary.max_exp,
                summary.count,
                if summary.planted { " (planted)" } else { "" }
            );
            let _ = writeln!(s, "instances           {}", t.instances);
            let _ = writeln!(s, "verdicts checked    {}", t.verdicts_checked);
            let _ = writeln!(s, "ladder violations   {}", t.ladder_violations);
            let _ = writeln!(s, "e_k < e_1^k         {}", t.mass_power_violations);
            let _ = writeln!(s, "homogeneity         {}", t.homogeneity_violations);
            let _ = writeln!(s, "closure invariance  {}", t.closure_violations);
            let _ = writeln!(s, "locus violations    {}", t.locus_violations);
            let _ = writeln!(s, "cross-validation    {}", t.cross_validation_disagreements);
            let _ = writeln!(s, "equality positives  {}", t.equality_positives);
            if summary.planted {
                let _ = writeln!(s, "true positives      {}/{}", t.true_positives, t.expected_positives);
                let _ = writeln!(s, "false positives     {}/{}", t.false_positives, t.expected_negatives);
            }
            if summary.oracle {
                let _ = writeln!(
                    s,
                    "oracle              {} checked, {} within tolerance, {} intervals hit",
                    t.oracle_checked, t.oracle_within_tolerance, t.oracle_interval_hits
                );
            }
            for d in summary.defects.iter().chain(&summary.oracle_notes) {
                let _ = writeln!(s, "{} [{}] {}", d.label, d.check, d.detail);
            }
            s
        }
    };
    Outcome {
        output,
        message: (!clean).then(|| format!("{} defect(s) found", summary.defects.len())),
        code: if clean { EXIT_OK } else { EXIT_DEFECT },
    }
}
