//! Seeded random corpora and the property suite run over them.

use std::sync::Mutex;

use lct_core::oracle::OracleConfig;
use lct_core::threshold::{self, Defect, ThresholdReport};
use lct_core::{
    invariants, ExponentVector, InvariantConfig, InvariantSet, Rational, SingularityInput,
};
use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::instance::{Instance, InstanceFile};
use crate::report::{self, FORMAT_TAG};

/// Largest dimension accepted by the generator.
pub const MAX_RANDOM_DIM: usize = 4;

/// Largest planted power.
pub const MAX_PLANTED_POWER: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub max_gens: usize,
    pub max_exp: i64,
    pub count: usize,
    pub seed: u64,
    /// Emit `count` planted `s * Delta_J` instances and `count` perturbed
    /// negatives instead of plain random ideals.
    pub planted: bool,
}

/// What the generator claims about an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Unknown,
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub instance: Instance,
    pub expect: Expectation,
    /// Planted `(J, s)`, 0-based, for positives and their perturbations.
    pub planted: Option<(Vec<usize>, i64)>,
}

fn random_row(rng: &mut ChaCha8Rng, n: usize, max_exp: i64) -> Vec<i64> {
    loop {
        let row: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
        if row.iter().any(|&e| e > 0) {
            return row;
        }
    }
}

fn to_input(n: usize, rows: &[Vec<i64>]) -> SingularityInput {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    SingularityInput::ideal(n, &refs).expect("generated rows are valid")
}

/// A monomial ideal with `1..=max_gens` generators and exponents in
/// `0..=max_exp`.
pub fn random_ideal(rng: &mut ChaCha8Rng, n: usize, max_gens: usize, max_exp: i64) -> SingularityInput {
    let k = rng.gen_range(1..=max_gens.max(1));
    let rows: Vec<Vec<i64>> = (0..k).map(|_| random_row(rng, n, max_exp.max(1))).collect();
    to_input(n, &rows)
}

/// Generators of `s * Delta_J` plus up to `max_gens` redundant points with
/// `sum_J x >= s`.
pub fn planted_rows(rng: &mut ChaCha8Rng, n: usize, max_gens: usize, max_exp: i64) -> (Vec<usize>, i64, Vec<Vec<i64>>) {
    let mut coords: Vec<usize> = (0..n).collect();
    coords.shuffle(rng);
    let size = rng.gen_range(1..=n);
    let mut j: Vec<usize> = coords[..size].to_vec();
    j.sort_unstable();
    let s = rng.gen_range(1..=MAX_PLANTED_POWER);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    // all monomials of degree s in the variables of J
    fn fill(j: &[usize], left: i64, row: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match j {
            [] => {}
            [last] => {
                row[*last] = left;
                out.push(row.clone());
                row[*last] = 0;
            }
            [first, rest @ ..] => {
                for e in 0..=left {
                    row[*first] = e;
                    fill(rest, left - e, row, out);
                }
                row[*first] = 0;
            }
        }
    }
    if rng.gen_bool(0.5) {
        fill(&j, s, &mut vec![0; n], &mut rows);
    } else {
        rows.extend(j.iter().map(|&c| {
            let mut r = vec![0; n];
            r[c] = s;
            r
        }));
    }
    let extra = rng.gen_range(1..=max_gens.max(1));
    for _ in 0..extra {
        let mut r: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_exp.max(1))).collect();
        let partial: i64 = j.iter().map(|&c| r[c]).sum();
        if partial < s {
            let c = *j.choose(rng).expect("J is nonempty");
            r[c] += s - partial;
        }
        rows.push(r);
    }
    rows.shuffle(rng);
    (j, s, rows)
}

/// A point `b` with `sum_J b < s` and at least two nonzero coordinates.
/// Returns `None` when no such point exists.
pub fn perturbation(rng: &mut ChaCha8Rng, n: usize, j: &[usize], s: i64) -> Option<Vec<i64>> {
    let room = (n - j.len()) + j.len().min((s - 1).max(0) as usize);
    if room < 2 {
        return None;
    }
    loop {
        let mut b = vec![0i64; n];
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(rng);
        let width = rng.gen_range(2..=n);
        let mut budget = s - 1;
        for &c in &coords[..width] {
            if j.contains(&c) {
                if budget > 0 {
                    let e = rng.gen_range(1..=budget);
                    b[c] = e;
                    budget -= e;
                }
            } else {
                b[c] = rng.gen_range(1..=MAX_PLANTED_POWER);
            }
        }
        if b.iter().filter(|&&e| e > 0).count() >= 2 {
            return Some(b);
        }
    }
}

pub fn generate(plan: &RandomSpec) -> Vec<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let n = plan.n;
    let mut out = Vec::new();
    for i in 0..plan.count {
        if plan.planted {
            // redraw plants that admit no perturbation, so every positive
            // gets a negative partner when n >= 2
            let (j, s, rows, b) = loop {
                let (j, s, rows) = planted_rows(&mut rng, n, plan.max_gens, plan.max_exp);
                let b = perturbation(&mut rng, n, &j, s);
                if b.is_some() || n < 2 {
                    break (j, s, rows, b);
                }
            };
            out.push(Generated {
                instance: Instance {
                    label: format!("planted-{i:05}"),
                    input: to_input(n, &rows),
                },
                expect: Expectation::Positive,
                planted: Some((j.clone(), s)),
            });
            if let Some(b) = b {
                let mut rows = rows;
                rows.push(b);
                out.push(Generated {
                    instance: Instance {
                        label: format!("negative-{i:05}"),
                        input: to_input(n, &rows),
                    },
                    expect: Expectation::Negative,
                    planted: Some((j, s)),
                });
            }
        } else {
            out.push(Generated {
                instance: Instance {
                    label: format!("random-{i:05}"),
                    input: random_ideal(&mut rng, n, plan.max_gens, plan.max_exp),
                },
                expect: Expectation::Unknown,
                planted: None,
            });
        }
    }
    out
}

/// A generator inside `Gamma` built from two existing ones:
/// `ceil((a + b) / 2) + e_j`.
pub fn interior_generator(input: &SingularityInput, a: usize, b: usize, j: usize) -> ExponentVector {
    let two = Rational::from_integer(BigInt::from(2));
    let ga = &input.generators()[a];
    let gb = &input.generators()[b];
    let coords = ga
        .coords()
        .iter()
        .zip(gb.coords())
        .enumerate()
        .map(|(k, (x, y))| {
            let mid = ((x + y) / &two).ceil();
            if k == j {
                mid + Rational::one()
            } else {
                mid
            }
        })
        .collect();
    ExponentVector::new(coords)
}

pub const SCALINGS: [(i64, i64); 3] = [(1, 2), (2, 1), (3, 1)];

/// Checks `c(t u) = c / t`, `nu(t u) = t nu`, `e_k(t u) = t^k e_k` and that
/// `l` is unchanged.
pub fn homogeneity_defects(
    input: &SingularityInput,
    inv: &InvariantSet,
    cfg: &InvariantConfig,
) -> Vec<Defect> {
    let mut defects = Vec::new();
    for (p, q) in SCALINGS {
        let t = Rational::new(p.into(), q.into());
        let scaled = match input.scaled(&t).and_then(|s| invariants::compute(&s, &scaled_cfg(cfg, &t))) {
            Ok(v) => v,
            Err(e) => {
                defects.push(Defect {
                    check: "homogeneity",
                    detail: format!("t = {t}: {e}"),
                });
                continue;
            }
        };
        let mut bad = Vec::new();
        if scaled.l != inv.l {
            bad.push(format!("l {} -> {}", inv.l, scaled.l));
        }
        if scaled.lct != &inv.lct / &t {
            bad.push(format!("c {} -> {}", inv.lct, scaled.lct));
        }
        if scaled.lelong != &inv.lelong * &t {
            bad.push(format!("nu {} -> {}", inv.lelong, scaled.lelong));
        }
        for k in 1..=inv.l {
            if scaled.e(k) != inv.e(k) * num_traits::pow(t.clone(), k) {
                bad.push(format!("e_{k} {} -> {}", inv.e(k), scaled.e(k)));
            }
        }
        if !bad.is_empty() {
            defects.push(Defect {
                check: "homogeneity",
                detail: format!("t = {t}: {}", bad.join(", ")),
            });
        }
    }
    defects
}

// an absolute cap on N refers to the cleared integer scale, which moves with t
fn scaled_cfg(cfg: &InvariantConfig, t: &Rational) -> InvariantConfig {
    match cfg.n_max {
        None => cfg.clone(),
        Some(v) => {
            let scaled = (Rational::from_integer(v.into()) * t * t.denom()).ceil();
            InvariantConfig {
                n_max: Some(num_traits::ToPrimitive::to_u64(&scaled.to_integer()).unwrap_or(u64::MAX)),
            }
        }
    }
}

/// Appending a generator inside `Gamma` must leave every invariant alone.
pub fn closure_defects(
    input: &SingularityInput,
    inv: &InvariantSet,
    cfg: &InvariantConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Defect> {
    let k = input.generators().len();
    let g = interior_generator(input, rng.gen_range(0..k), rng.gen_range(0..k), rng.gen_range(0..input.n()));
    let result = input
        .with_generator(g.clone())
        .and_then(|bigger| invariants::compute(&bigger, cfg));
    match result {
        Ok(other) if other == *inv => Vec::new(),
        Ok(other) => vec![Defect {
            check: "closure",
            detail: format!(
                "adding {g} changed the invariants (c {} -> {}, e {:?} -> {:?})",
                inv.lct,
                other.lct,
                inv.mixed.iter().map(ToString::to_string).collect::<Vec<_>>(),
                other.mixed.iter().map(ToString::to_string).collect::<Vec<_>>()
            ),
        }],
        Err(e) => vec![Defect {
            check: "closure",
            detail: format!("adding {g}: {e}"),
        }],
    }
}

/// Whenever equality fires: `l` is the minimum hitting-set size, the
/// witness set is the unique minimum hitting set and `e_k = e_1^k`.
pub fn locus_defects(input: &SingularityInput, report: &ThresholdReport) -> Vec<Defect> {
    if !report.equality_holds() {
        return Vec::new();
    }
    let inv = &report.invariants;
    let mut defects = Vec::new();
    let mut fail = |detail: String| {
        defects.push(Defect {
            check: "locus",
            detail,
        })
    };
    let sets = invariants::minimum_hitting_sets(input);
    if sets[0].len() != inv.l {
        fail(format!("l = {} but the minimum hitting set has size {}", inv.l, sets[0].len()));
    }
    if sets.len() != 1 {
        fail(format!("{} minimum hitting sets", sets.len()));
    }
    match &report.equality {
        Some(w) if sets.len() == 1 && w.coords != sets[0] => {
            fail(format!("witness {w} is not the minimum hitting set"))
        }
        Some(_) => {}
        None => fail("equality fired without a witness".to_string()),
    }
    for k in 1..=inv.l {
        if inv.e(k) != num_traits::pow(inv.lelong.clone(), k) {
            fail(format!("e_{k} = {} differs from e_1^{k}", inv.e(k)));
        }
    }
    defects
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectLine {
    pub label: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub instances: usize,
    pub verdicts_checked: usize,
    pub ladder_violations: usize,
    pub mass_power_violations: usize,
    pub homogeneity_violations: usize,
    pub closure_violations: usize,
    pub locus_violations: usize,
    pub cross_validation_disagreements: usize,
    pub equality_positives: usize,
    pub expected_positives: usize,
    pub true_positives: usize,
    pub expected_negatives: usize,
    pub false_positives: usize,
    pub oracle_checked: usize,
    pub oracle_within_tolerance: usize,
    pub oracle_interval_hits: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomSummary {
    pub format: &'static str,
    pub seed: u64,
    pub n: usize,
    pub max_gens: usize,
    pub max_exp: i64,
    pub count: usize,
    pub planted: bool,
    pub oracle: bool,
    pub tally: Tally,
    pub defects: Vec<DefectLine>,
    pub oracle_notes: Vec<DefectLine>,
    pub corpus: Vec<InstanceFile>,
}

impl RandomSummary {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
struct Outcome {
    tally: Tally,
    defects: Vec<Defect>,
    oracle_notes: Vec<String>,
}

fn check_one(
    item: &Generated,
    index: usize,
    seed: u64,
    cfg: &InvariantConfig,
    oracle_cfg: Option<&OracleConfig>,
) -> Outcome {
    let input = &item.instance.input;
    let mut out = Outcome::default();
    out.tally.instances = 1;
    let report = match threshold::analyze(input, cfg) {
        Ok(r) => r,
        Err(e) => {
            out.tally.errors = 1;
            out.defects.push(Defect {
                check: "error",
                detail: e.to_string(),
            });
            return out;
        }
    };
    let inv = &report.invariants;
    out.tally.verdicts_checked = report.verdicts.len();
    for v in &report.verdicts {
        if !v.holds {
            match v.relation {
                threshold::Relation::MassAbovePower => out.tally.mass_power_violations += 1,
                _ => out.tally.ladder_violations += 1,
            }
        }
    }
    if report.defects.iter().any(|d| d.check == "cross-validation") {
        out.tally.cross_validation_disagreements = 1;
    }
    out.defects.extend(report.defects.iter().cloned());

    let homogeneity = homogeneity_defects(input, inv, cfg);
    out.tally.homogeneity_violations = homogeneity.len();
    out.defects.extend(homogeneity);

    // per-instance stream so results do not depend on scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let closure = closure_defects(input, inv, cfg, &mut rng);
    out.tally.closure_violations = closure.len();
    out.defects.extend(closure);

    let locus = locus_defects(input, &report);
    out.tally.locus_violations = locus.len();
    out.defects.extend(locus);

    let positive = report.equality_holds();
    out.tally.equality_positives = usize::from(positive);
    match item.expect {
        Expectation::Positive => {
            out.tally.expected_positives = 1;
            let (j, s) = item.planted.as_ref().expect("positives carry their plant");
            let matches = report
                .equality
                .as_ref()
                .is_some_and(|w| w.coords == *j && w.s == Rational::from_integer((*s).into()));
            if matches {
                out.tally.true_positives = 1;
            } else {
                out.defects.push(Defect {
                    check: "planted",
                    detail: format!("planted J = {j:?}, s = {s} not recovered"),
                });
            }
        }
        Expectation::Negative => {
            out.tally.expected_negatives = 1;
            if positive || report.closure.is_some() {
                out.tally.false_positives = 1;
                out.defects.push(Defect {
                    check: "planted",
                    detail: "perturbed instance reported as s * Delta_J".to_string(),
                });
            }
        }
        Expectation::Unknown => {}
    }

    if let Some(ocfg) = oracle_cfg {
        if report::oracle_supported(input) {
            match report::oracle_check(input, &report, ocfg) {
                Ok(Some(o)) => {
                    out.tally.oracle_checked = 1;
                    out.tally.oracle_within_tolerance = usize::from(o.within_tolerance);
                    out.tally.oracle_interval_hits = usize::from(o.interval_contains_exact);
                    if !o.agrees() {
                        out.oracle_notes.push(format!(
                            "e_n {} vs {} (rel. err {:.4}), 1/c = {} vs [{}, {}]",
                            o.exact, o.estimate, o.relative_error, o.inverse_lct, o.lct_interval[0], o.lct_interval[1]
                        ));
                    }
                }
                Ok(None) => {}
                Err(e) => out.oracle_notes.push(e.to_string()),
            }
        }
    }
    out
}

fn merge(into: &mut Tally, t: &Tally) {
    into.instances += t.instances;
    into.verdicts_checked += t.verdicts_checked;
    into.ladder_violations += t.ladder_violations;
    into.mass_power_violations += t.mass_power_violations;
    into.homogeneity_violations += t.homogeneity_violations;
    into.closure_violations += t.closure_violations;
    into.locus_violations += t.locus_violations;
    into.cross_validation_disagreements += t.cross_validation_disagreements;
    into.equality_positives += t.equality_positives;
    into.expected_positives += t.expected_positives;
    into.true_positives += t.true_positives;
    into.expected_negatives += t.expected_negatives;
    into.false_positives += t.false_positives;
    into.oracle_checked += t.oracle_checked;
    into.oracle_within_tolerance += t.oracle_within_tolerance;
    into.oracle_interval_hits += t.oracle_interval_hits;
    into.errors += t.errors;
}

/// Runs the property suite over a generated corpus. Instances are checked
/// concurrently; the summary is ordered by label.
pub fn run_suite(
    items: &[Generated],
    seed: u64,
    cfg: &InvariantConfig,
    oracle_cfg: Option<&OracleConfig>,
) -> (Tally, Vec<DefectLine>, Vec<DefectLine>) {
    let slots: Vec<Mutex<Option<Outcome>>> = items.iter().map(|_| Mutex::new(None)).collect();
    let next = Mutex::new(0usize);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = {
                    let mut guard = next.lock().expect("counter lock");
                    let i = *guard;
                    *guard += 1;
                    i
                };
                if i >= items.len() {
                    break;
                }
                let outcome = check_one(&items[i], i, seed, cfg, oracle_cfg);
                *slots[i].lock().expect("slot lock") = Some(outcome);
            });
        }
    });

    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].instance.label.cmp(&items[b].instance.label));
    let mut tally = Tally::default();
    let mut defects = Vec::new();
    let mut notes = Vec::new();
    for i in order {
        let outcome = slots[i].lock().expect("slot lock").take().expect("every slot filled");
        let label = &items[i].instance.label;
        merge(&mut tally, &outcome.tally);
        defects.extend(outcome.defects.into_iter().map(|d| DefectLine {
            label: label.clone(),
            check: d.check.to_string(),
            detail: d.detail,
        }));
        notes.extend(outcome.oracle_notes.into_iter().map(|detail| DefectLine {
            label: label.clone(),
            check: "oracle".to_string(),
            detail,
        }));
    }
    (tally, defects, notes)
}

pub fn random(
    plan: &RandomSpec,
    cfg: &InvariantConfig,
    oracle_cfg: Option<&OracleConfig>,
) -> Result<RandomSummary, String> {
    if plan.n == 0 || plan.n > MAX_RANDOM_DIM {
        return Err(format!("random corpora need 1 <= n <= {MAX_RANDOM_DIM}, got {}", plan.n));
    }
    let mut items = generate(plan);
    items.sort_by(|a, b| a.instance.label.cmp(&b.instance.label));
    let (tally, defects, oracle_notes) = run_suite(&items, plan.seed, cfg, oracle_cfg);
    Ok(RandomSummary {
        format: FORMAT_TAG,
        seed: plan.seed,
        n: plan.n,
        max_gens: plan.max_gens,
        max_exp: plan.max_exp,
        count: plan.count,
        planted: plan.planted,
        oracle: oracle_cfg.is_some(),
        tally,
        defects,
        oracle_notes,
        corpus: items
            .iter()
            .map(|g| InstanceFile::from_input(&g.instance.input, Some(g.instance.label.clone())))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(planted: bool) -> RandomSpec {
        RandomSpec {
            n: 3,
            max_gens: 3,
            max_exp: 4,
            count: 20,
            seed: 7,
            planted,
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(generate(&plan(false)), generate(&plan(false)));
        assert_eq!(generate(&plan(true)), generate(&plan(true)));
        let mut other = plan(false);
        other.seed = 8;
        assert_ne!(generate(&plan(false)), generate(&other));
    }

    #[test]
    fn planted_instances_have_the_planted_closure() {
        for g in generate(&plan(true)) {
            let (j, s) = g.planted.clone().unwrap();
            let found = threshold::closure_power_test(&g.instance.input);
            match g.expect {
                Expectation::Positive => {
                    let w = found.expect("planted structure");
                    assert_eq!(w.coords, j);
                    assert_eq!(w.s, Rational::from_integer(s.into()));
                }
                _ => assert!(found.is_none(), "{}", g.instance.label),
            }
        }
    }

    #[test]
    fn interior_generator_lies_in_gamma() {
        let input = SingularityInput::ideal(2, &[&[3, 0], &[0, 1]]).unwrap();
        let g = interior_generator(&input, 0, 1, 1);
        assert_eq!(g, ExponentVector::from_ints([2, 2]));
        let poly = lct_core::NewtonPolyhedron::build(&input);
        assert!(poly.contains(g.coords()).unwrap());
    }

    #[test]
    fn perturbation_stays_below_the_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let b = perturbation(&mut rng, 3, &[0, 2], 3).unwrap();
            assert!(b[0] + b[2] < 3);
            assert!(b.iter().filter(|&&e| e > 0).count() >= 2);
        }
        assert!(perturbation(&mut rng, 1, &[0], 2).is_none());
    }

    #[test]
    fn small_suite_is_clean() {
        let summary = random(&plan(false), &InvariantConfig::default(), None).unwrap();
        assert!(summary.is_clean(), "{:?}", summary.defects);
        assert_eq!(summary.tally.instances, 20);
        let planted = random(&plan(true), &InvariantConfig::default(), None).unwrap();
        assert!(planted.is_clean(), "{:?}", planted.defects);
        assert_eq!(planted.tally.true_positives, 20);
        assert_eq!(planted.tally.false_positives, 0);
    }
}
