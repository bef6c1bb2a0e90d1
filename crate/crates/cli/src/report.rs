//! Machine-readable reports. Rationals are serialized as `"p/q"` strings;
//! floats appear only in the oracle error column.

use std::fmt::Write as _;

use lct_core::oracle::{self, OracleConfig};
use lct_core::threshold::{self, ThresholdReport};
use lct_core::{invariants, InvariantConfig, Kind, NewtonPolyhedron, Rational, SingularityInput};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::instance::Instance;

pub const FORMAT_TAG: &str = "lct-report/1";

pub fn q(r: &Rational) -> String {
    r.to_string()
}

fn vec_q(v: &[Rational]) -> Vec<String> {
    v.iter().map(q).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Document<T: Serialize> {
    pub format: &'static str,
    pub instances: Vec<T>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub label: String,
    pub n: usize,
    pub kind: &'static str,
    pub generators: Vec<Vec<String>>,
    pub apexes: Vec<Vec<String>>,
    pub invariants: InvariantsOut,
    pub ladder: LadderOut,
    pub equality: EqualityOut,
    pub oracle: Option<OracleOut>,
    pub defects: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsOut {
    pub l: usize,
    pub lelong: String,
    pub mixed: Vec<String>,
    pub lct: String,
    pub n_used: u64,
    pub denominator: String,
    pub regularized_top: String,
    pub stabilization: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct FOut {
    pub k: usize,
    pub e_k: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictOut {
    pub relation: String,
    pub holds: bool,
    pub tight: bool,
    pub certificate: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderOut {
    #[serde(rename = "E")]
    pub e: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<FOut>,
    pub verdicts: Vec<VerdictOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessOut {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub s: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityOut {
    pub holds: bool,
    pub fired_at: Vec<usize>,
    pub witness: Option<WitnessOut>,
    pub closure_witness: Option<WitnessOut>,
    pub agreement: bool,
    pub asymptotics: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleOut {
    pub power: u32,
    pub exact: String,
    pub estimate: String,
    pub relative_error: f64,
    pub tolerance: String,
    pub within_tolerance: bool,
    pub inverse_lct: String,
    pub lct_interval: [String; 2],
    pub interval_contains_exact: bool,
}

impl OracleOut {
    pub fn agrees(&self) -> bool {
        self.within_tolerance && self.interval_contains_exact
    }
}

fn witness(w: &Option<lct_core::EqualityStructure>) -> Option<WitnessOut> {
    w.as_ref().map(|w| WitnessOut {
        j: w.coords.iter().map(|j| j + 1).collect(),
        s: q(&w.s),
    })
}

/// Runs the counting oracle on the regularized integer ideal and the
/// bisection oracle on the input. Returns `None` above the oracle dimension.
pub fn oracle_check(
    input: &SingularityInput,
    report: &ThresholdReport,
    cfg: &OracleConfig,
) -> lct_core::Result<Option<OracleOut>> {
    if input.n() > oracle::MAX_ORACLE_DIM {
        return Ok(None);
    }
    let inv = &report.invariants;
    let (d, ideal) = oracle::as_ideal(input)?;
    let regularized = invariants::regularize(&ideal, inv.n_used)?;
    let d = Rational::from_integer(d);
    let exact = &inv.regularized_top * num_traits::pow(d, input.n());
    let estimate = oracle::multiplicity_estimate(&regularized, cfg)?;
    let err = oracle::relative_error(&estimate, &exact);
    let (lo, hi) = oracle::lct_estimate(input, cfg)?;
    let inverse = inv.lct.recip();
    Ok(Some(OracleOut {
        power: cfg.power_cap,
        exact: q(&exact),
        estimate: q(&estimate),
        relative_error: err.to_f64().unwrap_or(f64::NAN),
        tolerance: q(&cfg.tolerance),
        within_tolerance: err <= cfg.tolerance,
        inverse_lct: q(&inverse),
        interval_contains_exact: lo <= inverse && inverse <= hi,
        lct_interval: [q(&lo), q(&hi)],
    }))
}

pub fn build(
    instance: &Instance,
    cfg: &InvariantConfig,
    oracle_cfg: Option<&OracleConfig>,
) -> lct_core::Result<(InstanceReport, ThresholdReport)> {
    let input = &instance.input;
    let report = threshold::analyze(input, cfg)?;
    let oracle = match oracle_cfg {
        Some(c) => oracle_check(input, &report, c)?,
        None => None,
    };
    let inv = &report.invariants;
    let l = inv.l;
    let poly = NewtonPolyhedron::build(input);
    let out = InstanceReport {
        label: instance.label.clone(),
        n: input.n(),
        kind: input.kind().as_str(),
        generators: input.generators().iter().map(|g| vec_q(g.coords())).collect(),
        apexes: poly.apexes().iter().map(|g| vec_q(g.coords())).collect(),
        invariants: InvariantsOut {
            l,
            lelong: q(&inv.lelong),
            mixed: vec_q(&inv.mixed),
            lct: q(&inv.lct),
            n_used: inv.n_used,
            denominator: inv.denominator.to_string(),
            regularized_top: q(&inv.regularized_top),
            stabilization: "e_k taken at the first N where N and 2N agree",
        },
        ladder: LadderOut {
            e: vec_q(&report.e_bounds),
            f: report
                .f_bounds
                .iter()
                .map(|f| FOut {
                    k: f.k,
                    e_k: q(&f.e_k),
                })
                .collect(),
            verdicts: report
                .verdicts
                .iter()
                .map(|v| VerdictOut {
                    relation: v.relation.describe(v.k, l),
                    holds: v.holds,
                    tight: v.tight,
                    certificate: v.certificate.clone(),
                })
                .collect(),
        },
        equality: EqualityOut {
            holds: report.equality_holds(),
            fired_at: report.equality_at.clone(),
            witness: witness(&report.equality),
            closure_witness: witness(&report.closure),
            agreement: report.equality == report.closure,
            asymptotics: "not machine-checked",
        },
        oracle,
        defects: report.defects.iter().map(ToString::to_string).collect(),
    };
    Ok((out, report))
}

pub fn render_text(reports: &[InstanceReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let inv = &r.invariants;
        let _ = writeln!(s, "== {} (n = {}, {})", r.label, r.n, r.kind);
        let gens: Vec<String> = r.generators.iter().map(|g| format!("({})", g.join(","))).collect();
        let _ = writeln!(s, "generators: {}", gens.join(" "));
        let _ = writeln!(
            s,
            "l = {}  nu = {}  e = [{}]  c = {}  N = {}",
            inv.l,
            inv.lelong,
            inv.mixed.join(", "),
            inv.lct,
            inv.n_used
        );
        let _ = writeln!(s, "E = [{}]", r.ladder.e.join(", "));
        for v in &r.ladder.verdicts {
            let mark = match (v.holds, v.tight) {
                (false, _) => "FAIL",
                (true, true) => "tight",
                (true, false) => "strict",
            };
            let _ = writeln!(s, "  {:<14} {:<7} {}", v.relation, mark, v.certificate);
        }
        let describe = |w: &Option<WitnessOut>| match w {
            Some(w) => format!(
                "J = {{{}}}, s = {}",
                w.j.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                w.s
            ),
            None => "none".to_string(),
        };
        let _ = writeln!(
            s,
            "equality: {}  witness: {}  closure: {}  (asymptotics {})",
            r.equality.holds,
            describe(&r.equality.witness),
            describe(&r.equality.closure_witness),
            r.equality.asymptotics
        );
        if let Some(o) = &r.oracle {
            let _ = writeln!(
                s,
                "oracle: e_n = {} vs {} at m = {} (rel. err {:.4}, {}), 1/c = {} in [{}, {}]: {}",
                o.exact,
                o.estimate,
                o.power,
                o.relative_error,
                if o.within_tolerance { "ok" } else { "outside tolerance" },
                o.inverse_lct,
                o.lct_interval[0],
                o.lct_interval[1],
                o.interval_contains_exact
            );
        }
        for d in &r.defects {
            let _ = writeln!(s, "DEFECT {d}");
        }
    }
    s
}

/// Whether an instance can be fed to the counting oracle.
pub fn oracle_supported(input: &SingularityInput) -> bool {
    input.n() <= oracle::MAX_ORACLE_DIM && input.kind() == Kind::Ideal
}
