//! Named examples: each id pins a space, symbol, seed function, norms and
//! schedule, runs them, and judges the resulting report.

use crate::CliError;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use ri_ergodic::ergodic::{
    convergence_report, decomposition_check, permutation_limit, ErgodicReport, ReportConfig,
};
use ri_ergodic::rearrange::rearrangement;
use ri_ergodic::spaces::{norm_eval, AnalyticProfile, NormSpec, QuasiconcaveFn, XiWeight};
use ri_ergodic::symbols::{apply, apply_profile, check_condition_i, lower_bound, measure_bound, permutation_cycles};
use ri_ergodic::symbols::{power_measure_bound, AtomicSymbol};
use ri_ergodic::{indicator, AtomSeq, MeasFn, MeasSet, MeasureSpace, StepFn, Symbol};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const DEFAULT_SEED: u64 = 42;
/// Random seed functions drawn by the randomized examples.
pub const SAMPLES: usize = 50;
/// Relative slack for comparisons of two floating-point evaluations.
pub const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum ExampleId {
    #[value(name = "counterex-sv")]
    CounterexSv,
    #[value(name = "counterex-sv-power")]
    CounterexSvPower,
    #[value(name = "counterex-l1")]
    CounterexL1,
    #[value(name = "counterex-linfty")]
    CounterexLinfty,
    #[value(name = "shift-n")]
    ShiftN,
    #[value(name = "shift-z")]
    ShiftZ,
    #[value(name = "nonsurjective-shift")]
    NonsurjectiveShift,
    #[value(name = "permutation-demo")]
    PermutationDemo,
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::CounterexSv,
        ExampleId::CounterexSvPower,
        ExampleId::CounterexL1,
        ExampleId::CounterexLinfty,
        ExampleId::ShiftN,
        ExampleId::ShiftZ,
        ExampleId::NonsurjectiveShift,
        ExampleId::PermutationDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::CounterexSv => "counterex-sv",
            ExampleId::CounterexSvPower => "counterex-sv-power",
            ExampleId::CounterexL1 => "counterex-l1",
            ExampleId::CounterexLinfty => "counterex-linfty",
            ExampleId::ShiftN => "shift-n",
            ExampleId::ShiftZ => "shift-z",
            ExampleId::NonsurjectiveShift => "nonsurjective-shift",
            ExampleId::PermutationDemo => "permutation-demo",
        }
    }

    pub fn parse(s: &str) -> Option<ExampleId> {
        Self::ALL.into_iter().find(|id| id.name() == s)
    }
}

/// Overrides of the pinned configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleOptions {
    /// Cesàro schedule for the trajectory examples.
    pub schedule: Option<Vec<u64>>,
    /// Number of powers for `counterex-sv-power` and `nonsurjective-shift`.
    pub horizon: Option<u32>,
    pub seed: u64,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        ExampleOptions { schedule: None, horizon: None, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleRun {
    pub id: ExampleId,
    pub seed: u64,
    pub report: ErgodicReport,
    /// Quantities outside the per-`n` table.
    pub extra: Value,
    pub checks: Vec<Check>,
}

impl ExampleRun {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id.name(),
            "seed": self.seed,
            "report": self.report.to_json(),
            "extra": self.extra,
            "checks": self.checks,
            "verdict": if self.passed() { "pass" } else { "fail" },
        })
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), passed, detail: detail.into() }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * b.abs().max(a.abs())
}

fn leq(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * b.abs()
}

fn col(report: &ErgodicReport, name: &str) -> Result<Vec<f64>, CliError> {
    report.column(name).ok_or_else(|| CliError::Internal(format!("report lacks column {name}")))
}

fn first_failure(report: &ErgodicReport, ok: impl Fn(usize, u64) -> bool) -> Option<u64> {
    report.rows.iter().enumerate().find(|(i, r)| !ok(*i, r.n)).map(|(_, r)| r.n)
}

fn verdict(name: &str, report: &ErgodicReport, what: &str, ok: impl Fn(usize, u64) -> bool) -> Check {
    match first_failure(report, ok) {
        None => check(name, true, format!("{what} for every {}", report.index)),
        Some(n) => check(name, false, format!("{what} fails at {} = {n}", report.index)),
    }
}

/// Runs one example.
pub fn run_example(id: ExampleId, opts: &ExampleOptions) -> Result<ExampleRun, CliError> {
    let (report, extra, checks) = match id {
        ExampleId::CounterexSv => counterex_sv(opts)?,
        ExampleId::CounterexSvPower => counterex_sv_power(opts)?,
        ExampleId::CounterexL1 => counterex_l1(opts)?,
        ExampleId::CounterexLinfty => counterex_linfty(opts)?,
        ExampleId::ShiftN => shift(opts, false)?,
        ExampleId::ShiftZ => shift(opts, true)?,
        ExampleId::NonsurjectiveShift => nonsurjective_shift(opts)?,
        ExampleId::PermutationDemo => permutation_demo(opts)?,
    };
    Ok(ExampleRun { id, seed: opts.seed, report, extra, checks })
}

type Outcome = (ErgodicReport, Value, Vec<Check>);

// ---------------------------------------------------------------------------
// Seed functions

fn grid_step(rng: &mut ChaCha8Rng, space: MeasureSpace, cells: i64, h: f64, zero_tail: bool) -> MeasFn {
    let count = rng.random_range(usize::from(zero_tail)..8);
    let mut ks: Vec<i64> = (0..count).map(|_| rng.random_range(1..cells)).collect();
    ks.sort_unstable();
    ks.dedup();
    let bps: Vec<f64> = ks.iter().map(|&k| k as f64 * h).collect();
    let mut values: Vec<f64> = (0..=bps.len()).map(|_| rng.random_range(-16i32..=16) as f64 / 4.0).collect();
    if zero_tail {
        *values.last_mut().expect("nonempty") = 0.0;
    }
    if values.iter().all(|&v| v == 0.0) {
        values[0] = 1.0;
    }
    MeasFn::Step(StepFn::new(space, bps, values).expect("grid data is valid"))
}

/// A nonzero step function on `[0, 1)` with breakpoints in `(1/64)ℤ` and
/// values in `(1/4)ℤ ∩ [−4, 4]`.
pub fn random_unit_step(rng: &mut ChaCha8Rng) -> MeasFn {
    grid_step(rng, MeasureSpace::unit_interval(), 64, 1.0 / 64.0, false)
}

/// A nonzero step function on `[0, ∞)` supported in `[0, 8)`, breakpoints
/// in `(1/16)ℤ`.
pub fn random_compact_half_line(rng: &mut ChaCha8Rng) -> MeasFn {
    grid_step(rng, MeasureSpace::half_line(), 128, 1.0 / 16.0, true)
}

/// A bump on `[1, 1 + 2^-j)`, `4 ≤ j ≤ 40`, where the two-piece power maps
/// concentrate preimage measure, over [`random_compact_half_line`] scaled
/// by `1/16`.
pub fn random_compact_with_bump(rng: &mut ChaCha8Rng) -> MeasFn {
    let base = random_compact_half_line(rng).scale(1.0 / 16.0);
    let j = rng.random_range(4..=40);
    let height = rng.random_range(1i32..=16) as f64 / 4.0;
    let bump = indicator(&MeasureSpace::half_line(), &MeasSet::interval(1.0, 1.0 + 2f64.powi(-j)))
        .expect("a bounded interval")
        .scale(height);
    ri_ergodic::stepfn::add(&base, &bump).expect("same space")
}

/// Nonzero values in `(1/4)ℤ ∩ [−4, 4]` on the atoms `0..len`.
pub fn random_atoms(rng: &mut ChaCha8Rng, space: MeasureSpace, len: usize) -> AtomSeq {
    let mut values: Vec<f64> = (0..len).map(|_| rng.random_range(-16i32..=16) as f64 / 4.0).collect();
    if values.iter().all(|&v| v == 0.0) {
        values[0] = 1.0;
    }
    AtomSeq::from_values(space, &values).expect("finite values on the first atoms")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_weight(space: MeasureSpace) -> NormSpec {
    NormSpec::marc_weak(QuasiconcaveFn::LogClip, space).expect("the log weight is admissible")
}

// ---------------------------------------------------------------------------
// Examples

/// `t ↦ tⁿ` on `[0, 1)`: not measure bounded, yet `m_Φ` is preserved up to
/// the factor `n`. The map `exp(1 − 1/t)` sends a truncation of `1/Φ` to a
/// function of arbitrarily large `m_Φ` norm.
fn counterex_sv(opts: &ExampleOptions) -> Result<Outcome, CliError> {
    let unit = MeasureSpace::unit_interval();
    let spec = log_weight(unit);
    let mut rng = rng(opts.seed);
    let fs: Vec<MeasFn> = (0..SAMPLES).map(|_| random_unit_step(&mut rng)).collect();
    let mut report =
        ErgodicReport::new("n", vec!["measure_bound".into(), "max_ratio".into(), "ratio_bound".into()]);
    for n in [2u32, 3] {
        let phi = Symbol::power_on_unit(n)?;
        let analysis = check_condition_i(&phi, crate::eval::DEFAULT_HORIZON)?;
        let ratios = fs
            .par_iter()
            .map(|f| Ok(norm_eval(&spec, &apply(&phi, f)?)? / norm_eval(&spec, f)?))
            .collect::<Result<Vec<f64>, ri_ergodic::Error>>()?;
        let max = ratios.into_iter().fold(0.0f64, f64::max);
        report.push(n as u64, vec![analysis.measure_bound, max, n as f64]);
    }
    let bounds = col(&report, "measure_bound")?;
    let (max, cap) = (col(&report, "max_ratio")?, col(&report, "ratio_bound")?);

    let log_clip = QuasiconcaveFn::LogClip;
    let exp_recip = Symbol::exp_recip();
    let eps = 1e-6;
    let truncated = AnalyticProfile::reciprocal_log_clip().capped(1.0 / eps)?;
    let blown_up = apply_profile(&exp_recip, &truncated)?.marc_weak_norm(&log_clip)?;
    let closed_form = log_clip.eval(eps) / eps;

    // the same construction at a coarser ε, against step functions below the profiles
    let eps2 = 1e-2;
    let coarse = AnalyticProfile::reciprocal_log_clip().capped(1.0 / eps2)?;
    let image = apply_profile(&exp_recip, &coarse)?;
    let analytic = image.marc_weak_norm(&log_clip)?;
    let image_step = norm_eval(&spec, &image.lower_step(1e-4, 64)?.into())?;
    let applied_step = norm_eval(&spec, &apply(&exp_recip, &coarse.lower_step(1e-4, 64)?.into())?)?;

    let extra = json!({
        "samples": SAMPLES,
        "exp_recip": { "eps": eps, "norm": blown_up, "closed_form": closed_form, "threshold": 1e4 },
        "consistency": {
            "eps": eps2,
            "closed_form": analytic,
            "lower_step_norm": image_step,
            "applied_lower_step_norm": applied_step,
        },
    });
    let checks = vec![
        verdict("measure_bound_infinite", &report, "measure_bound = inf", |i, _| bounds[i] == f64::INFINITY),
        verdict("log_weight_ratio", &report, "max m(Tf)/m(f) <= n", |i, _| max[i] <= cap[i]),
        check("exp_recip_blow_up", blown_up > 1e4, format!("m(T 1/Φ_ε) = {blown_up} at ε = {eps}")),
        check("exp_recip_closed_form", close(blown_up, closed_form), format!("{blown_up} vs Φ(ε)/ε = {closed_form}")),
        check(
            "profile_step_consistency",
            leq(image_step, analytic)
                && leq(applied_step, analytic)
                && image_step >= analytic * (1.0 - 1e-9)
                && applied_step >= analytic * (1.0 - 1e-9),
            format!("steps {image_step}, {applied_step} vs closed form {analytic}"),
        ),
    ];
    Ok((report, extra, checks))
}

/// The two-piece map `1 + tⁿ`, `n(t − 1) + 2` on `[0, ∞)`: every power
/// changes `m_Φ` by at most the factor `n`.
fn counterex_sv_power(opts: &ExampleOptions) -> Result<Outcome, CliError> {
    let horizon = opts.horizon.unwrap_or(30);
    if horizon == 0 {
        return Err(CliError::Usage("horizon must be positive".into()));
    }
    let half = MeasureSpace::half_line();
    let spec = log_weight(half);
    let mut rng = rng(opts.seed);
    let fs: Vec<MeasFn> = (0..SAMPLES).map(|_| random_compact_with_bump(&mut rng)).collect();
    let ns = [2u32, 3];
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for n in ns {
        let phi = Symbol::sv_power_map(n)?;
        let per_f = fs
            .par_iter()
            .map(|f| {
                let base = norm_eval(&spec, f)?;
                let mut g = f.clone();
                let mut out = Vec::with_capacity(horizon as usize);
                for _ in 0..horizon {
                    g = apply(&phi, &g)?;
                    out.push(norm_eval(&spec, &g)? / base);
                }
                Ok(out)
            })
            .collect::<Result<Vec<Vec<f64>>, ri_ergodic::Error>>()?;
        columns.push((0..horizon as usize).map(|k| per_f.iter().map(|r| r[k]).fold(0.0, f64::max)).collect());
    }
    let mut report = ErgodicReport::new("k", ns.iter().map(|n| format!("ratio[n={n}]")).collect());
    for k in 0..horizon as usize {
        report.push(k as u64 + 1, columns.iter().map(|c| c[k]).collect());
    }
    let mut checks = Vec::new();
    for n in ns {
        let c = col(&report, &format!("ratio[n={n}]"))?;
        let what = format!("max m(T^k f)/m(f) <= {n} + 1e-9");
        checks.push(verdict(&format!("power_ratio_n{n}"), &report, &what, |i, _| c[i] <= n as f64 + 1e-9));
    }
    Ok((report, json!({ "samples": SAMPLES, "support": [0.0, 8.0] }), checks))
}

/// Translation by one on ℝ, `f = χ_[0,1)`: `C_n f = (1/n)χ_[0,n)`, so the
/// means tend to zero in `L²` while the unit-weight ξ-seminorm stays 1.
fn counterex_l1(opts: &ExampleOptions) -> Result<Outcome, CliError> {
    let schedule = opts.schedule.clone().unwrap_or_else(|| vec![1, 10, 100, 1000]);
    let line = MeasureSpace::line();
    let phi = Symbol::translation(-1.0)?;
    let f = indicator(&line, &MeasSet::interval(0.0, 1.0))?;
    let cfg = ReportConfig {
        specs: vec![NormSpec::lp(2.0, line)?],
        weights: vec![XiWeight::unit()],
        ..ReportConfig::default()
    };
    let traj = ri_ergodic::ergodic::cesaro_trajectory(&phi, &f, &schedule)?;
    let base = convergence_report(&phi, &f, &schedule, &cfg)?.report;
    let mut columns = base.columns.clone();
    columns.extend(["L2_closed_form".to_string(), "matches_closed_form".to_string()]);
    let mut report = ErgodicReport::new("n", columns);
    for row in &base.rows {
        let n = row.n as f64;
        let closed = indicator(&line, &MeasSet::interval(0.0, n))?.scale(1.0 / n);
        let mut values = row.values.clone();
        values.push(n.powf(-0.5));
        values.push(if traj.means[&row.n] == closed { 1.0 } else { 0.0 });
        report.push(row.n, values);
    }
    let (l2, xi) = (col(&report, "L2")?, col(&report, &XiWeight::unit().label())?);
    let (l2_cf, exact) = (col(&report, "L2_closed_form")?, col(&report, "matches_closed_form")?);
    let checks = vec![
        verdict("closed_form", &report, "C_n f = (1/n)χ_[0,n)", |i, _| exact[i] == 1.0),
        verdict("xi_unit_weight", &report, "ξ-seminorm = 1", |i, _| xi[i] == 1.0),
        verdict("l2_decay", &report, "|L2 - n^(-1/2)| <= 1e-12", |i, _| (l2[i] - l2_cf[i]).abs() <= 1e-12),
    ];
    Ok((report, json!({ "f": f }), checks))
}

/// Translation by one on ℝ, `f = χ_[0,∞)`: every mean is equimeasurable
/// with the constant 1.
fn counterex_linfty(opts: &ExampleOptions) -> Result<Outcome, CliError> {
    let schedule = opts.schedule.clone().unwrap_or_else(|| (2..=100).collect());
    let line = MeasureSpace::line();
    let phi = Symbol::translation(-1.0)?;
    let f = indicator(&line, &MeasSet::interval(0.0, f64::INFINITY))?;
    let one: MeasFn = StepFn::constant(MeasureSpace::half_line(), 1.0)?.into();
    let linf = NormSpec::lp(f64::INFINITY, line)?;
    let traj = ri_ergodic::ergodic::cesaro_trajectory(&phi, &f, &schedule)?;
    let mut report = ErgodicReport::new("n", vec!["rearrangement_is_one".into(), linf.label()]);
    for (&n, mean) in &traj.means {
        let is_one = rearrangement(mean).to_measfn() == one;
        report.push(n, vec![if is_one { 1.0 } else { 0.0 }, norm_eval(&linf, mean)?]);
    }
    let flags = col(&report, "rearrangement_is_one")?;
    let checks = vec![verdict("rearrangement_constant_one", &report, "(C_n f)* = χ_[0,∞)", |i, _| flags[i] == 1.0)];
    Ok((report, json!({ "f": f }), checks))
}

/// The shift `j ↦ j + 1` on ℕ or ℤ applied to `χ_{0..5}`.
fn shift(opts: &ExampleOptions, bilateral: bool) -> Result<Outcome, CliError> {
    let schedule = opts.schedule.clone().unwrap_or_else(|| (0..=10).map(|i| 1u64 << i).collect());
    let (phi, space) = if bilateral {
        (Symbol::bilateral_shift(), MeasureSpace::integers())
    } else {
        (Symbol::unilateral_shift(), MeasureSpace::naturals())
    };
    let f = indicator(&space, &MeasSet::atoms(0..=5))?;
    let cfg = ReportConfig {
        specs: vec![
            NormSpec::lp(1.0, space)?,
            NormSpec::lp(2.0, space)?,
            NormSpec::lorentz(2.0, 1.0, space)?,
            NormSpec::weak_lp(2.0, space)?,
        ],
        limit_oracle: Some(MeasFn::zero(space)?),
        ..ReportConfig::default()
    };
    let base = convergence_report(&phi, &f, &schedule, &cfg)?.report;
    let mut columns = base.columns.clone();
    columns.push("lorentz_bound".into());
    let mut report = ErgodicReport::new("n", columns);
    for row in &base.rows {
        let n = row.n as f64;
        let mut values = row.values.clone();
        values.push(12.0 * (n + 5.0).sqrt() / n);
        report.push(row.n, values);
    }
    let (l1, dist) = (col(&report, "L1")?, col(&report, "dist[L1]")?);
    let (lorentz, bound) = (col(&report, "Lorentz(2,1)")?, col(&report, "lorentz_bound")?);
    let mut checks =
        vec![verdict("lorentz_bound", &report, "Lorentz(2,1) <= 12√(n+5)/n", |i, _| leq(lorentz[i], bound[i]))];
    if bilateral {
        checks.push(verdict("l1_constant", &report, "L1 = 6", |i, _| close(l1[i], 6.0)));
    } else {
        checks.push(verdict("l1_distance", &report, "dist[L1] = 21/n for n >= 6", |i, n| {
            n < 6 || close(dist[i], 21.0 / n as f64)
        }));
    }
    Ok((report, json!({ "f": f }), checks))
}

/// `0 ↦ 0`, `j ↦ j − 1` on ℕ: measure bounded with `A = 2` and bounded from
/// below with `C = 1`, but `A_k = k + 1` grows; `T_φ` is not onto since
/// `T f(0) = T f(1)`.
fn nonsurjective_shift(opts: &ExampleOptions) -> Result<Outcome, CliError> {
    let horizon = opts.horizon.unwrap_or(5);
    if horizon == 0 {
        return Err(CliError::Usage("horizon must be positive".into()));
    }
    let phi = Symbol::backward_shift_absorbing();
    let pb = power_measure_bound(&phi, horizon)?;
    let mut report = ErgodicReport::new("k", vec!["A_k".into(), "exact".into()]);
    for e in &pb.per_n {
        report.push(e.n as u64, vec![e.value, if e.exact { 1.0 } else { 0.0 }]);
    }
    let (a, c) = (measure_bound(&phi), lower_bound(&phi));
    let mut rng = rng(opts.seed);
    let f: MeasFn = random_atoms(&mut rng, MeasureSpace::naturals(), 8).into();
    let tf = apply(&phi, &f)?;
    let (t0, t1) = (tf.eval(0.0)?, tf.eval(1.0)?);
    let (ak, exact) = (col(&report, "A_k")?, col(&report, "exact")?);
    let checks = vec![
        check("measure_bound", a == 2.0, format!("A = {a}")),
        check("lower_bound", c == 1.0, format!("C = {c}")),
        verdict("power_bounds", &report, "A_k = k + 1, exact", |i, k| ak[i] == k as f64 + 1.0 && exact[i] == 1.0),
        check("not_onto", t0 == t1, format!("Tf(0) = {t0}, Tf(1) = {t1}")),
    ];
    let extra = json!({
        "measure_bound": ri_ergodic::json::ExtReal(a),
        "lower_bound": ri_ergodic::json::ExtReal(c),
        "f": f,
        "tf": tf,
    });
    Ok((report, extra, checks))
}

/// A permutation of eight atoms with cycles of lengths 3, 2, 1, 2.
fn permutation_demo(opts: &ExampleOptions) -> Result<Outcome, CliError> {
    let schedule = opts.schedule.clone().unwrap_or_else(|| (0..=14).map(|i| 1u64 << i).collect());
    let phi = Symbol::permutation(vec![1, 2, 0, 4, 3, 5, 7, 6])?;
    let Symbol::Atomic(sigma) = &phi else { unreachable!("permutations are atomic") };
    let space = *phi.space();
    let mut rng = rng(opts.seed);
    let seq = random_atoms(&mut rng, space, 8);
    let f: MeasFn = seq.clone().into();
    let outcome = permutation_outcome(sigma, &seq, &schedule)?;
    let base = outcome.report;
    let mut report = ErgodicReport::new("n", [base.columns.clone(), vec!["bound".to_string()]].concat());
    for (row, b) in base.rows.iter().zip(&outcome.bounds) {
        report.push(row.n, [row.values.clone(), vec![*b]].concat());
    }
    let (dist, bound) = (col(&report, "dist[Linf]")?, col(&report, "bound")?);
    let checks = vec![
        check("limit_invariant", outcome.invariant, "T_σ(Tf) = Tf"),
        check("decomposition", outcome.decomposition.verified, "(I - T_σ)g = f - Tf"),
        verdict("rate", &report, "|C_n f - Tf|_∞ <= 2L|f|_∞/n", |i, _| leq(dist[i], bound[i])),
    ];
    let extra = json!({
        "f": f,
        "limit": MeasFn::Atoms(outcome.limit),
        "longest_cycle": outcome.longest_cycle,
        "decomposition": outcome.decomposition,
    });
    Ok((report, extra, checks))
}

/// Mean-ergodic diagnostics of a permutation along a schedule.
#[derive(Debug, Clone)]
pub struct PermutationOutcome {
    /// Columns `Linf` and `dist[Linf]` against the limit.
    pub report: ErgodicReport,
    pub limit: AtomSeq,
    pub invariant: bool,
    pub decomposition: ri_ergodic::ergodic::Decomposition,
    pub longest_cycle: usize,
    /// `2L‖f‖_∞/n` per scheduled `n`, with `L` the longest cycle.
    pub bounds: Vec<f64>,
}

pub fn permutation_outcome(
    sigma: &AtomicSymbol,
    f: &AtomSeq,
    schedule: &[u64],
) -> Result<PermutationOutcome, CliError> {
    let phi = Symbol::Atomic(sigma.clone());
    let space = *sigma.space();
    let limit = permutation_limit(sigma, f)?;
    let limit_fn = MeasFn::Atoms(limit.clone());
    let invariant = apply(&phi, &limit_fn)? == limit_fn;
    let decomposition = decomposition_check(sigma, f)?;
    let longest_cycle = permutation_cycles(sigma)?.iter().map(Vec::len).max().unwrap_or(1);
    let cfg = ReportConfig {
        specs: vec![NormSpec::lp(f64::INFINITY, space)?],
        limit_oracle: Some(limit_fn),
        ..ReportConfig::default()
    };
    let report = convergence_report(&phi, &f.clone().into(), schedule, &cfg)?.report;
    let sup = f.entries().values().fold(0.0f64, |m, v| m.max(v.abs()));
    let bounds = report.rows.iter().map(|r| 2.0 * longest_cycle as f64 * sup / r.n as f64).collect();
    Ok(PermutationOutcome { report, limit, invariant, decomposition, longest_cycle, bounds })
}

/// A uniformly random permutation table of `0..len`.
pub fn random_permutation(rng: &mut ChaCha8Rng, len: usize) -> Vec<i64> {
    let mut t: Vec<i64> = (0..len as i64).collect();
    for i in (1..len).rev() {
        t.swap(i, rng.random_range(0..=i));
    }
    t
}

/// Output files of a run: `<id>.csv` and/or `<id>.json`.
pub fn render(run: &ExampleRun) -> BTreeMap<&'static str, Vec<u8>> {
    let mut out = BTreeMap::new();
    out.insert("csv", run.report.to_csv().into_bytes());
    out.insert("json", crate::output::json_bytes(&run.to_json()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in ExampleId::ALL {
            assert_eq!(ExampleId::parse(id.name()), Some(id));
            let v = <ExampleId as clap::ValueEnum>::to_possible_value(&id).unwrap();
            assert_eq!(v.get_name(), id.name());
        }
        assert_eq!(ExampleId::parse("nope"), None);
    }

    #[test]
    fn seeded_functions_are_reproducible() {
        let (mut a, mut b) = (rng(5), rng(5));
        for _ in 0..20 {
            assert_eq!(random_unit_step(&mut a), random_unit_step(&mut b));
            let g = random_compact_half_line(&mut a);
            assert_eq!(g, random_compact_half_line(&mut b));
            assert!(!g.is_zero());
            assert_eq!(g.eval(8.0).unwrap(), 0.0);
        }
        let p = random_permutation(&mut a, 64);
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..64).collect::<Vec<i64>>());
    }

    #[test]
    fn l1_report_row_100() {
        let run = run_example(ExampleId::CounterexL1, &ExampleOptions::default()).unwrap();
        assert!(run.passed(), "{:?}", run.checks);
        let i = run.report.rows.iter().position(|r| r.n == 100).unwrap();
        assert_eq!(run.report.column("xi[1]").unwrap()[i], 1.0);
        assert!((run.report.column("L2").unwrap()[i] - 0.1).abs() <= 1e-12);
    }
}
