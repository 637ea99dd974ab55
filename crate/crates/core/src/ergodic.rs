//! Composition operators, Cesàro means, the truncated maximal ergodic
//! operator and convergence diagnostics.

use crate::error::{Error, Result};
use crate::rearrange::rearrangement;
use crate::spaces::{fundamental_function, norm_eval, xi_seminorm, NormSpec, XiWeight};
use crate::stepfn::{add, max, pointwise_leq, sub, AtomSeq, MeasFn};
use crate::symbols::{permutation_cycles, AtomicSymbol, Symbol};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use crate::symbols::apply;

/// Tolerance for the pointwise Cauchy diagnostic of [`convergence_report`].
pub const POINTWISE_CAUCHY_TOL: f64 = 1e-6;

/// `T_φᵏ f`.
pub fn iterate(phi: &Symbol, f: &MeasFn, k: u32) -> Result<MeasFn> {
    let mut g = f.clone();
    for _ in 0..k {
        g = apply(phi, &g)?;
    }
    Ok(g)
}

/// Running sums `Σ_{i<n} T_φⁱ f` produced one `n` at a time.
struct Orbit<'a> {
    phi: &'a Symbol,
    current: MeasFn,
    sum: MeasFn,
    n: u64,
}

impl<'a> Orbit<'a> {
    fn new(phi: &'a Symbol, f: &MeasFn) -> Result<Self> {
        if f.space() != phi.space() {
            return Err(Error::SpaceMismatch);
        }
        Ok(Orbit { phi, current: f.clone(), sum: f.clone(), n: 1 })
    }

    fn advance(&mut self) -> Result<()> {
        self.current = apply(self.phi, &self.current)?;
        self.sum = add(&self.sum, &self.current)?;
        self.n += 1;
        Ok(())
    }

    fn mean(&self) -> MeasFn {
        let n = self.n as f64;
        self.sum.map_values(|v| v / n)
    }
}

fn run_orbit<'a>(phi: &'a Symbol, f: &MeasFn, n: u64) -> Result<Orbit<'a>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut orbit = Orbit::new(phi, f)?;
    while orbit.n < n {
        orbit.advance()?;
    }
    Ok(orbit)
}

/// `C_n f = (1/n) Σ_{i<n} T_φⁱ f`.
pub fn cesaro(phi: &Symbol, f: &MeasFn, n: u64) -> Result<MeasFn> {
    Ok(run_orbit(phi, f, n)?.mean())
}

/// `Σ_{i<n} T_φⁱ f`, free of the rounding in the division by `n`.
pub fn cesaro_sum(phi: &Symbol, f: &MeasFn, n: u64) -> Result<MeasFn> {
    Ok(run_orbit(phi, f, n)?.sum)
}

/// Cesàro means of one seed along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroTrajectory {
    pub symbol: Symbol,
    pub seed: MeasFn,
    pub schedule: Vec<u64>,
    pub means: BTreeMap<u64, MeasFn>,
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("schedule must be a nonempty increasing list of positive n".into()));
    }
    Ok(())
}

pub fn cesaro_trajectory(phi: &Symbol, f: &MeasFn, schedule: &[u64]) -> Result<CesaroTrajectory> {
    check_schedule(schedule)?;
    let mut orbit = Orbit::new(phi, f)?;
    let mut means = BTreeMap::new();
    for &n in schedule {
        while orbit.n < n {
            orbit.advance()?;
        }
        means.insert(n, orbit.mean());
    }
    Ok(CesaroTrajectory { symbol: phi.clone(), seed: f.clone(), schedule: schedule.to_vec(), means })
}

/// `T#_{φ,K} f = max_{n ≤ K} (1/n) Σ_{i<n} |T_φⁱ f|`.
pub fn maximal_truncated(phi: &Symbol, f: &MeasFn, k: u64) -> Result<MeasFn> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    let mut orbit = Orbit::new(phi, &f.abs())?;
    let mut best = orbit.mean();
    while orbit.n < k {
        orbit.advance()?;
        best = max(&best, &orbit.mean())?;
    }
    Ok(best)
}

fn finite_permutation(sigma: &AtomicSymbol, f: &AtomSeq) -> Result<Vec<Vec<usize>>> {
    if f.space() != sigma.space() {
        return Err(Error::SpaceMismatch);
    }
    permutation_cycles(sigma)
}

/// The ergodic limit of a permutation: orbit averages over each cycle.
pub fn permutation_limit(sigma: &AtomicSymbol, f: &AtomSeq) -> Result<AtomSeq> {
    let cycles = finite_permutation(sigma, f)?;
    let mut entries = BTreeMap::new();
    for cycle in &cycles {
        let avg = cycle.iter().map(|&j| f.get(j as i64)).sum::<f64>() / cycle.len() as f64;
        for &j in cycle {
            entries.insert(j as i64, avg);
        }
    }
    AtomSeq::new(*sigma.space(), entries, 0.0)
}

/// `f = Tf + (I − T_σ) g`, solved exactly in rationals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "as_measfn")]
    pub kernel_part: AtomSeq,
    #[serde(serialize_with = "as_measfn")]
    pub range_part: AtomSeq,
    #[serde(serialize_with = "as_measfn")]
    pub witness: AtomSeq,
    /// `T_σ(Tf) = Tf` and `(I − T_σ) g = f − Tf`, checked in exact arithmetic.
    pub verified: bool,
}

fn as_measfn<S: serde::Serializer>(f: &AtomSeq, s: S) -> std::result::Result<S::Ok, S::Error> {
    MeasFn::Atoms(f.clone()).serialize(s)
}

fn rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::InvalidFunction(format!("{v} is not finite")))
}

fn to_seq(sigma: &AtomicSymbol, values: &[BigRational]) -> Result<AtomSeq> {
    let entries = values.iter().enumerate().map(|(j, v)| (j as i64, v.to_f64().unwrap_or(f64::NAN))).collect();
    AtomSeq::new(*sigma.space(), entries, 0.0)
}

pub fn decomposition_check(sigma: &AtomicSymbol, f: &AtomSeq) -> Result<Decomposition> {
    let cycles = finite_permutation(sigma, f)?;
    let len = sigma.table().len();
    let fv: Vec<BigRational> = (0..len).map(|j| rational(f.get(j as i64))).collect::<Result<_>>()?;
    let mut kernel = vec![BigRational::zero(); len];
    let mut witness = vec![BigRational::zero(); len];
    for cycle in &cycles {
        let total: BigRational = cycle.iter().map(|&j| fv[j].clone()).sum();
        let avg = total / BigRational::from_integer((cycle.len() as i64).into());
        let mut g = BigRational::zero();
        for &j in cycle {
            kernel[j] = avg.clone();
            witness[j] = g.clone();
            g -= &fv[j] - &avg;
        }
    }
    let range: Vec<BigRational> = (0..len).map(|j| &fv[j] - &kernel[j]).collect();
    let image = |j: usize| sigma.map(j as i64) as usize;
    let invariant = (0..len).all(|j| kernel[image(j)] == kernel[j]);
    let solves = (0..len).all(|j| &witness[j] - &witness[image(j)] == range[j]);
    Ok(Decomposition {
        kernel_part: to_seq(sigma, &kernel)?,
        range_part: to_seq(sigma, &range)?,
        witness: to_seq(sigma, &witness)?,
        verified: invariant && solves,
    })
}

/// Per-`n` diagnostics of a Cesàro trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicReport {
    pub index: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: u64,
    #[serde(with = "crate::json::ext_real_vec")]
    pub values: Vec<f64>,
}

impl ErgodicReport {
    pub fn new(index: &str, columns: Vec<String>) -> Self {
        ErgodicReport { index: index.to_string(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, n: u64, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(ReportRow { n, values });
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = std::iter::once(self.index.clone()).chain(self.columns.iter().map(|c| csv_field(c))).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{}", row.n);
            for v in &row.values {
                out.push(',');
                out.push_str(&format_value(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip decimal, `inf`/`-inf` for infinities.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v}")
    }
}

/// Configuration of [`convergence_report`].
#[derive(Debug, Clone, Default)]
pub struct ReportConfig {
    pub specs: Vec<NormSpec>,
    pub weights: Vec<XiWeight>,
    pub limit_oracle: Option<MeasFn>,
    pub sample_points: Vec<f64>,
}

/// A convergence table plus the pointwise Cauchy diagnostic: whether each
/// sampled value moved by at most [`POINTWISE_CAUCHY_TOL`] between the last
/// two scheduled `n`. This is a heuristic, not a proof of convergence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub report: ErgodicReport,
    pub pointwise_cauchy: Vec<bool>,
}

pub fn convergence_report(phi: &Symbol, f: &MeasFn, schedule: &[u64], cfg: &ReportConfig) -> Result<Convergence> {
    for spec in &cfg.specs {
        if spec.space() != phi.space() {
            return Err(Error::SpaceMismatch);
        }
    }
    if let Some(oracle) = &cfg.limit_oracle {
        if oracle.space() != phi.space() {
            return Err(Error::SpaceMismatch);
        }
    }
    for &x in &cfg.sample_points {
        f.eval(x)?;
    }
    let mut columns: Vec<String> = cfg.specs.iter().map(|s| s.label()).collect();
    columns.extend(cfg.weights.iter().map(|w| w.label()));
    if cfg.limit_oracle.is_some() {
        columns.extend(cfg.specs.iter().map(|s| format!("dist[{}]", s.label())));
    }
    columns.extend(cfg.sample_points.iter().map(|x| format!("f({x})")));
    let traj = cesaro_trajectory(phi, f, schedule)?;
    let mut report = ErgodicReport::new("n", columns);
    for (&n, mean) in &traj.means {
        let mut row = Vec::with_capacity(report.columns.len());
        for spec in &cfg.specs {
            row.push(norm_eval(spec, mean)?);
        }
        for w in &cfg.weights {
            row.push(xi_seminorm(w, mean)?);
        }
        if let Some(oracle) = &cfg.limit_oracle {
            let diff = sub(mean, oracle)?;
            for spec in &cfg.specs {
                row.push(norm_eval(spec, &diff)?);
            }
        }
        for &x in &cfg.sample_points {
            row.push(mean.eval(x)?);
        }
        report.push(n, row);
    }
    let first_sample = report.columns.len() - cfg.sample_points.len();
    let pointwise_cauchy = (0..cfg.sample_points.len())
        .map(|i| match report.rows.as_slice() {
            [.., a, b] => (a.values[first_sample + i] - b.values[first_sample + i]).abs() <= POINTWISE_CAUCHY_TOL,
            _ => false,
        })
        .collect();
    Ok(Convergence { report, pointwise_cauchy })
}

/// `max_s s·φ_X(μ{T#_{φ,K} f > s}) / ‖f‖_X` over the grid.
pub fn weak_type_ratio(phi: &Symbol, f: &MeasFn, k: u64, spec: &NormSpec, s_grid: &[f64]) -> Result<f64> {
    if !pointwise_leq(&MeasFn::zero(*f.space())?, f)? {
        return Err(Error::InvalidFunction("f must be nonnegative".into()));
    }
    if s_grid.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter("levels must be positive and finite".into()));
    }
    let norm = norm_eval(spec, f)?;
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidFunction(format!("‖f‖ = {norm} admits no ratio")));
    }
    let sharp = rearrangement(&maximal_truncated(phi, f, k)?);
    let mut best = 0.0f64;
    for &s in s_grid {
        let m = sharp.distribution_at(s);
        let phi_m = if m == 0.0 { 0.0 } else { fundamental_function(spec, m)? };
        best = best.max(s * phi_m / norm);
    }
    Ok(best)
}
