//! Seeded property suites over random dyadic instances.
//!
//! Every property draws its instances from a ChaCha generator seeded by the
//! suite seed and the property name, so a `(seed, trials)` pair always runs
//! the same cases. Failing instances are shrunk before being reported.
//!
//! Breakpoints are multiples of `1/16` (`1/64` on the unit interval) and
//! values are multiples of `1/4`, so sums, integrals and dyadic dilations are
//! exact in `f64` and most comparisons need no tolerance. Norm comparisons,
//! which involve fractional powers, allow a relative slack of [`NORM_REL_TOL`].

use crate::ergodic::{cesaro, cesaro_sum, decomposition_check, maximal_truncated, permutation_limit, weak_type_ratio};
use crate::error::Result;
use crate::measure_space::{measure, merge_intervals, AtomSet, Interval, MeasSet, MeasureSpace, SpaceKind};
use crate::rearrange::{
    distribution_at, equimeasurable, hardy_integral, hardy_littlewood_pair, hlp_leq, hlp_leq_rearranged,
    integrate_product, rearrangement, Rearranged,
};
use crate::spaces::{norm_eval, xi_seminorm, NormKind, NormSpec, QuasiconcaveFn, XiWeight};
use crate::stepfn::{add, indicator, integrate, linear_combine, pointwise_leq, AtomSeq, MeasFn, StepFn};
use crate::symbols::{apply, lower_bound, measure_bound, power_measure_bound, preimage, AtomicSymbol, Symbol};
use proptest::prelude::*;
use proptest::strategy::{BoxedStrategy, Just};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};

/// Relative slack for comparisons between two norm evaluations.
pub const NORM_REL_TOL: f64 = 1e-12;

/// Every property of the full suite, in reporting order.
pub const PROPERTIES: &[&str] = &[
    "measure_additive",
    "measure_zero_iff_empty",
    "canonicalize_idempotent",
    "integrate_linear",
    "combine_canonical",
    "equimeasurability",
    "rearrangement_quasi_subadditive",
    "hardy_integral_subadditive",
    "hardy_lemma",
    "dilate_composition",
    "hardy_littlewood_inequality",
    "norm_lattice",
    "norm_rearrangement_invariant",
    "xi_triangle",
    "xi_hardy_littlewood_consistency",
    "hlp_norm_monotone",
    "dilation_contraction",
    "marc_strong_dominates_weak",
    "dilation_estimate_upper",
    "dilation_estimate_lower",
    "dilation_estimate_power",
    "preimage_disjoint_union",
    "iterate_identity",
    "power_bound_transfer",
    "cesaro_hlp",
    "injectivity_estimate",
    "maximal_domination",
    "permutation_mean_ergodic",
    "weak_type_hopf",
];

/// A deliberately false property used to check that the harness reports
/// and shrinks failures.
pub const SELF_TEST: &str = "harness_self_test";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub reason: String,
    /// The shrunk instance.
    pub instance: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub cases: u32,
    /// Cases that passed before the first failure (all of them on success).
    pub passed: u32,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: u32,
    pub properties: Vec<PropertyOutcome>,
    pub failures: usize,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Check = std::result::Result<(), String>;

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

fn norm_leq(a: f64, b: f64) -> bool {
    a <= b || a <= b + NORM_REL_TOL * b.abs()
}

fn property_seed(seed: u64, name: &str) -> [u8; 32] {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut out = [0u8; 32];
    for (i, chunk) in out.chunks_mut(8).enumerate() {
        let word = match i {
            0 => seed,
            1 => h,
            2 => seed.rotate_left(17) ^ h,
            _ => h.rotate_left(29).wrapping_add(seed),
        };
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    out
}

fn run<S>(name: &str, seed: u64, trials: u32, strategy: S, check: impl Fn(&S::Value) -> Check) -> PropertyOutcome
where
    S: Strategy,
    S::Value: Serialize,
{
    let config = Config {
        cases: trials,
        failure_persistence: None,
        max_shrink_iters: 2048,
        max_global_rejects: trials.saturating_mul(64),
        ..Config::default()
    };
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &property_seed(seed, name));
    let mut runner = TestRunner::new_with_rng(config, rng);
    let passed = AtomicU32::new(0);
    let failed = AtomicBool::new(false);
    let result = runner.run(&strategy, |v| match check(&v) {
        Ok(()) => {
            if !failed.load(Ordering::Relaxed) {
                passed.fetch_add(1, Ordering::Relaxed);
            }
            Ok(())
        }
        Err(msg) => {
            failed.store(true, Ordering::Relaxed);
            Err(TestCaseError::fail(msg))
        }
    });
    let failure = match result {
        Ok(()) => None,
        Err(TestError::Fail(reason, value)) => Some(Failure {
            reason: reason.to_string(),
            instance: serde_json::to_value(&value).unwrap_or(serde_json::Value::Null),
        }),
        Err(TestError::Abort(reason)) => Some(Failure { reason: reason.to_string(), instance: serde_json::Value::Null }),
    };
    let passed = if failure.is_none() { trials } else { passed.load(Ordering::Relaxed).min(trials) };
    PropertyOutcome { name: name.to_string(), cases: trials, passed, failure }
}

/// Runs one named property.
pub fn run_property(name: &str, seed: u64, trials: u32) -> Option<PropertyOutcome> {
    let out = match name {
        "measure_additive" => run(name, seed, trials, labelled_sets(4), prop_measure_additive),
        "measure_zero_iff_empty" => run(name, seed, trials, labelled_sets(2), prop_measure_zero_iff_empty),
        "canonicalize_idempotent" => run(name, seed, trials, any_fn(), prop_canonicalize_idempotent),
        "integrate_linear" => run(name, seed, trials, pair_with_coeffs(), prop_integrate_linear),
        "combine_canonical" => run(name, seed, trials, pair_with_coeffs(), prop_combine_canonical),
        "equimeasurability" => run(name, seed, trials, any_fn(), prop_equimeasurability),
        "rearrangement_quasi_subadditive" => run(name, seed, trials, fn_pair(), prop_quasi_subadditive),
        "hardy_integral_subadditive" => run(name, seed, trials, fn_pair(), prop_hardy_integral_subadditive),
        "hardy_lemma" => run(name, seed, trials, (averaged_pair(), weight()), prop_hardy_lemma),
        "dilate_composition" => run(name, seed, trials, (any_fn(), -3i32..=3, -3i32..=3), prop_dilate_composition),
        "hardy_littlewood_inequality" => run(name, seed, trials, hl_pair(), prop_hardy_littlewood),
        "norm_lattice" => run(name, seed, trials, dominated_pair(), prop_norm_lattice),
        "norm_rearrangement_invariant" => {
            run(name, seed, trials, with_fn(preserving_symbol(), false), prop_norm_rearrangement_invariant)
        }
        "xi_triangle" => run(name, seed, trials, (fn_pair(), weight()), prop_xi_triangle),
        "xi_hardy_littlewood_consistency" => {
            run(name, seed, trials, (fn_on(MeasureSpace::half_line(), false), weight()), prop_xi_hl_consistency)
        }
        "hlp_norm_monotone" => run(name, seed, trials, (averaged_pair(), hlp_spec()), prop_hlp_norm_monotone),
        "dilation_contraction" => {
            run(name, seed, trials, (any_fn(), any_spec(), 0i32..=4, 0u32..=3), prop_dilation_contraction)
        }
        "marc_strong_dominates_weak" => run(name, seed, trials, (any_fn(), phi()), prop_marc_strong_dominates_weak),
        "dilation_estimate_upper" => run(name, seed, trials, with_fn(bounded_symbol(), false), prop_dilation_upper),
        "dilation_estimate_lower" => run(name, seed, trials, with_fn(lower_symbol(), false), prop_dilation_lower),
        "dilation_estimate_power" => {
            run(name, seed, trials, (with_fn(bounded_symbol(), false), 1u32..=10), prop_dilation_power)
        }
        "preimage_disjoint_union" => run(name, seed, trials, symbol_with_sets(), prop_preimage_disjoint_union),
        "iterate_identity" => {
            run(name, seed, trials, (with_fn(atomic_symbol(), false), 1u32..=6), prop_iterate_identity)
        }
        "power_bound_transfer" => {
            run(name, seed, trials, (with_fn(bounded_symbol(), false), 1u32..=6, any_spec()), prop_power_bound_transfer)
        }
        "cesaro_hlp" => run(name, seed, trials, cesaro_instance(), prop_cesaro_hlp),
        "injectivity_estimate" => {
            run(name, seed, trials, (with_fn(lower_symbol(), false), any_spec()), prop_injectivity_estimate)
        }
        "maximal_domination" => run(name, seed, trials, (with_fn(any_symbol(), false), 1u64..=12), prop_maximal_domination),
        "permutation_mean_ergodic" => run(name, seed, trials, permutation_instance(), prop_permutation_mean_ergodic),
        "weak_type_hopf" => run(name, seed, trials, (with_fn(hopf_symbol(), true), 1u64..=64), prop_weak_type_hopf),
        SELF_TEST => run(name, seed, trials, any_fn(), |f: &MeasFn| {
            ensure(rearrangement(f).sup() < 1.0, || "sup f* reached 1".into())
        }),
        _ => return None,
    };
    Some(out)
}

/// Runs every property in parallel; with `inject_violation` the failing
/// [`SELF_TEST`] property is added.
pub fn verify_suite(seed: u64, trials: u32, inject_violation: bool) -> SuiteSummary {
    let trials = trials.max(1);
    let mut names: Vec<&str> = PROPERTIES.to_vec();
    if inject_violation {
        names.push(SELF_TEST);
    }
    let properties: Vec<PropertyOutcome> =
        names.par_iter().map(|n| run_property(n, seed, trials).expect("known property")).collect();
    let failures = properties.iter().filter(|p| p.failure.is_some()).count();
    SuiteSummary { seed, trials, properties, failures }
}

// ---------------------------------------------------------------------------
// Generators

/// Interior grid `(lo, hi, step)` with breakpoints `k·step`, `lo < k < hi`.
fn grid(space: MeasureSpace) -> (i64, i64, f64) {
    match space.kind() {
        SpaceKind::LebesgueLine => (-128, 128, 1.0 / 16.0),
        SpaceKind::LebesgueInterval { length } => (0, 64, length / 64.0),
        _ => (0, 128, 1.0 / 16.0),
    }
}

/// Index window `[lo, hi)` used for atomic entries.
fn index_window(space: MeasureSpace) -> (i64, i64) {
    match space.index_range() {
        Some((Some(_), Some(count))) => (0, count),
        Some((Some(_), None)) => (0, 24),
        _ => (-24, 24),
    }
}

fn values(nonneg: bool) -> std::ops::RangeInclusive<i32> {
    if nonneg {
        0..=16
    } else {
        -16..=16
    }
}

fn step_fn(space: MeasureSpace, nonneg: bool) -> BoxedStrategy<MeasFn> {
    let (lo, hi, h) = grid(space);
    let vals = values(nonneg);
    (prop::collection::vec((lo + 1..hi, vals.clone()), 0..8), vals, prop::bool::weighted(0.8))
        .prop_map(move |(mut pairs, first, zero_tails)| {
            pairs.sort_by_key(|p| p.0);
            pairs.dedup_by_key(|p| p.0);
            let bps: Vec<f64> = pairs.iter().map(|p| p.0 as f64 * h).collect();
            let mut vals: Vec<f64> =
                std::iter::once(first).chain(pairs.iter().map(|p| p.1)).map(|v| v as f64 / 4.0).collect();
            if zero_tails {
                if space.kind() == SpaceKind::LebesgueLine {
                    vals[0] = 0.0;
                }
                if space.domain().is_some_and(|d| d.1.is_infinite()) {
                    *vals.last_mut().expect("nonempty") = 0.0;
                }
            }
            MeasFn::Step(StepFn::new(space, bps, vals).expect("grid data is valid"))
        })
        .boxed()
}

fn atom_seq(space: MeasureSpace, nonneg: bool) -> BoxedStrategy<MeasFn> {
    let (lo, hi) = index_window(space);
    let vals = values(nonneg);
    let tails = matches!(space.kind(), SpaceKind::AtomicN { .. });
    (prop::collection::vec((lo..hi, vals.clone()), 0..10), vals, prop::bool::weighted(0.85))
        .prop_map(move |(pairs, tail, zero_tail)| {
            let entries: BTreeMap<i64, f64> = pairs.into_iter().map(|(j, v)| (j, v as f64 / 4.0)).collect();
            let tail = if tails && !zero_tail { tail as f64 / 4.0 } else { 0.0 };
            MeasFn::Atoms(AtomSeq::new(space, entries, tail).expect("window data is valid"))
        })
        .boxed()
}

fn fn_on(space: MeasureSpace, nonneg: bool) -> BoxedStrategy<MeasFn> {
    if space.is_atomic() {
        atom_seq(space, nonneg)
    } else {
        step_fn(space, nonneg)
    }
}

fn any_space() -> BoxedStrategy<MeasureSpace> {
    prop_oneof![
        Just(MeasureSpace::line()),
        Just(MeasureSpace::half_line()),
        Just(MeasureSpace::unit_interval()),
        Just(MeasureSpace::naturals()),
        Just(MeasureSpace::integers()),
        (1u64..=32).prop_map(|n| MeasureSpace::atomic_finite(1.0, n).expect("valid")),
    ]
    .boxed()
}

fn any_fn() -> BoxedStrategy<MeasFn> {
    any_space().prop_flat_map(|s| fn_on(s, false)).boxed()
}

fn fn_pair() -> BoxedStrategy<(MeasFn, MeasFn)> {
    any_space().prop_flat_map(|s| (fn_on(s, false), fn_on(s, false))).boxed()
}

fn pair_with_coeffs() -> BoxedStrategy<((MeasFn, MeasFn), i32, i32)> {
    (fn_pair(), -8i32..=8, -8i32..=8).boxed()
}

fn hl_pair() -> BoxedStrategy<(MeasFn, MeasFn)> {
    prop_oneof![
        4 => fn_pair(),
        1 => (weight(), weight()).prop_map(|(a, b)| (Rearranged::from(a).to_measfn(), Rearranged::from(b).to_measfn())),
    ]
    .boxed()
}

/// `(f, g)` with `|f| ≤ |g|` pointwise.
fn dominated_pair() -> BoxedStrategy<(MeasFn, MeasFn, NormSpec)> {
    (fn_pair(), 0i32..=4, any_spec())
        .prop_map(|((g, h), k, spec)| {
            let f = MeasFn::zip_with(&[&g, &h], |v| if v[1] >= 0.0 { v[0] * k as f64 / 4.0 } else { 0.0 })
                .expect("same space");
            (f, g, spec)
        })
        .boxed()
}

/// `(f, g)` with `f` a Cesàro mean of `g` under a translation, hence
/// `f ≺ g`.
fn averaged_pair() -> BoxedStrategy<(MeasFn, MeasFn)> {
    (fn_on(MeasureSpace::line(), false), -16i32..=16, 0u32..=3)
        .prop_map(|(g, beta, k)| {
            let tr = Symbol::translation(beta as f64 / 16.0).expect("valid");
            let f = cesaro(&tr, &g, 1 << k).expect("same space");
            (f, g)
        })
        .boxed()
}

fn weight() -> BoxedStrategy<XiWeight> {
    (prop::collection::vec((1i32..=32, 1i32..=16), 0..5), 0i32..=2)
        .prop_filter_map("nonzero weight", |(mut pieces, tail)| {
            pieces.sort_by_key(|p| -p.1);
            let tail = (tail as f64 / 4.0).min(pieces.last().map_or(f64::INFINITY, |p| p.1 as f64 / 4.0));
            let widths: Vec<(f64, f64)> = pieces.iter().map(|&(w, v)| (w as f64 / 16.0, v as f64 / 4.0)).collect();
            XiWeight::new(Rearranged::from_widths(&widths, tail).ok()?).ok()
        })
        .boxed()
}

fn phi() -> BoxedStrategy<QuasiconcaveFn> {
    prop_oneof![
        prop::sample::select(vec![0.25, 0.5, 0.75, 1.0]).prop_map(|a| QuasiconcaveFn::power(a).expect("valid")),
        Just(QuasiconcaveFn::LogClip),
    ]
    .boxed()
}

fn spec_kind() -> BoxedStrategy<NormKind> {
    prop_oneof![
        prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY]).prop_map(|p| NormKind::Lp { p }),
        prop::sample::select(vec![(2.0, 1.0), (2.0, 2.0), (3.0, 2.0), (1.5, 1.0), (2.0, 4.0), (1.0, 1.0)])
            .prop_map(|(p, q)| NormKind::Lorentz { p, q }),
        prop::sample::select(vec![1.0, 2.0]).prop_map(|p| NormKind::WeakLp { p }),
        phi().prop_map(|phi| NormKind::MarcWeak { phi }),
        phi().prop_map(|phi| NormKind::MarcStrong { phi }),
    ]
    .boxed()
}

/// A spec on the half-line; callers move it to the function's space.
fn any_spec() -> BoxedStrategy<NormSpec> {
    spec_kind().prop_map(|k| NormSpec::new(k, MeasureSpace::half_line()).expect("valid")).boxed()
}

/// Norms for which `f ≺ g` implies `‖f‖ ≤ ‖g‖`.
fn hlp_spec() -> BoxedStrategy<NormSpec> {
    prop_oneof![
        prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY]).prop_map(|p| NormKind::Lp { p }),
        prop::sample::select(vec![(2.0, 1.0), (2.0, 2.0), (3.0, 2.0), (1.5, 1.0), (3.0, 1.5)])
            .prop_map(|(p, q)| NormKind::Lorentz { p, q }),
        phi().prop_map(|phi| NormKind::MarcStrong { phi }),
    ]
    .prop_map(|k| NormSpec::new(k, MeasureSpace::half_line()).expect("valid"))
    .boxed()
}

fn sixteenths(range: std::ops::RangeInclusive<i32>) -> impl Strategy<Value = f64> {
    range.prop_map(|k| k as f64 / 16.0)
}

fn translation() -> BoxedStrategy<Symbol> {
    sixteenths(-48..=48).prop_map(|b| Symbol::translation(b).expect("valid")).boxed()
}

fn affine_line(slopes: Vec<f64>) -> BoxedStrategy<Symbol> {
    (prop::sample::select(slopes), sixteenths(-32..=32))
        .prop_map(|(a, b)| Symbol::affine_line(a, b).expect("valid"))
        .boxed()
}

fn affine_half(slopes: Vec<f64>, offsets: bool) -> BoxedStrategy<Symbol> {
    let hi = if offsets { 32 } else { 0 };
    (prop::sample::select(slopes), sixteenths(0..=hi))
        .prop_map(|(a, b)| Symbol::affine_half_line(a, b).expect("valid"))
        .boxed()
}

fn permutation(max_len: usize) -> BoxedStrategy<Symbol> {
    (1..=max_len)
        .prop_flat_map(|n| Just((0..n as i64).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|p| Symbol::permutation(p).expect("bijective"))
        .boxed()
}

fn atomic_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![
        Just(Symbol::unilateral_shift()),
        Just(Symbol::bilateral_shift()),
        Just(Symbol::backward_shift_absorbing()),
        permutation(16),
    ]
    .boxed()
}

/// Catalog symbols whose iterates all have exact finite measure bounds.
fn bounded_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![
        translation(),
        affine_line(vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]),
        affine_half(vec![0.5, 1.0, 2.0, 4.0], true),
        Just(Symbol::doubling_map()),
        Just(Symbol::reflection_unit()),
        atomic_symbol(),
    ]
    .boxed()
}

/// Catalog symbols with a finite power-measure-bound.
fn power_bounded_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![
        translation(),
        affine_line(vec![-4.0, -2.0, -1.0, 1.0, 2.0, 4.0]),
        affine_half(vec![1.0, 2.0, 4.0], true),
        Just(Symbol::doubling_map()),
        Just(Symbol::reflection_unit()),
        Just(Symbol::unilateral_shift()),
        Just(Symbol::bilateral_shift()),
        permutation(16),
    ]
    .boxed()
}

/// Catalog symbols measure-bounded from below with an exact constant.
fn lower_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![
        translation(),
        affine_line(vec![-2.0, -0.5, 0.5, 1.0, 2.0]),
        affine_half(vec![0.5, 1.0, 2.0], false),
        Just(Symbol::doubling_map()),
        Just(Symbol::reflection_unit()),
        (2u32..=3).prop_map(|n| Symbol::power_on_unit(n).expect("valid")),
        Just(Symbol::bilateral_shift()),
        Just(Symbol::backward_shift_absorbing()),
        permutation(16),
    ]
    .boxed()
}

fn any_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![
        bounded_symbol(),
        (2u32..=3).prop_map(|n| Symbol::power_on_unit(n).expect("valid")),
        (2u32..=3).prop_map(|n| Symbol::sv_power_map(n).expect("valid")),
        Just(Symbol::exp_recip()),
    ]
    .boxed()
}

fn preserving_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![
        translation(),
        affine_line(vec![-1.0]),
        Just(Symbol::doubling_map()),
        Just(Symbol::reflection_unit()),
        Just(Symbol::bilateral_shift()),
        permutation(16),
    ]
    .boxed()
}

/// Translations, shifts and permutations.
fn hopf_symbol() -> BoxedStrategy<Symbol> {
    prop_oneof![translation(), Just(Symbol::unilateral_shift()), Just(Symbol::bilateral_shift()), permutation(16)]
        .boxed()
}

fn with_fn(symbols: BoxedStrategy<Symbol>, nonneg: bool) -> BoxedStrategy<(Symbol, MeasFn)> {
    symbols
        .prop_flat_map(move |s| {
            let space = *s.space();
            (Just(s), fn_on(space, nonneg))
        })
        .boxed()
}

fn cesaro_instance() -> BoxedStrategy<(Symbol, MeasFn, u64)> {
    with_fn(power_bounded_symbol(), false)
        .prop_flat_map(|(s, f)| {
            let top: u64 = if s == Symbol::doubling_map() { 10 } else { 100 };
            (Just(s), Just(f), 1..=top)
        })
        .boxed()
}

fn permutation_instance() -> BoxedStrategy<(Symbol, MeasFn, u64)> {
    permutation(64)
        .prop_flat_map(|s| {
            let space = *s.space();
            (Just(s), atom_seq(space, false), 1u64..=1024)
        })
        .boxed()
}

/// Sets built by labelling grid cells (and possibly rays) with
/// `0..labels`; cells labelled `labels` stay unassigned.
#[derive(Debug, Clone, Serialize)]
struct Labelled {
    space: MeasureSpace,
    sets: Vec<MeasSet>,
}

fn labelled_sets(labels: u8) -> BoxedStrategy<Labelled> {
    any_space().prop_flat_map(move |space| labelled_on(space, labels)).boxed()
}

fn labelled_on(space: MeasureSpace, labels: u8) -> BoxedStrategy<Labelled> {
    let (lo, hi, h, atomic) = if space.is_atomic() {
        let (lo, hi) = index_window(space);
        (lo, hi, 1.0, true)
    } else {
        let (lo, hi, h) = grid(space);
        (lo, hi, h, false)
    };
    let cells = (hi - lo) as usize;
    (
        prop::collection::vec((0..cells, 1usize..=8, 0..=labels), 0..6),
        0..=labels,
        0..=labels,
    )
        .prop_map(move |(marks, low_ray, high_ray)| {
            let mut label = vec![labels; cells];
            for (start, len, l) in marks {
                for c in label.iter_mut().skip(start).take(len) {
                    *c = l;
                }
            }
            let (dlo, dhi) = space.domain().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
            let range = space.index_range().unwrap_or((Some(0), Some(0)));
            let sets = (0..labels)
                .map(|l| {
                    let cells_of = (0..cells).filter(|&c| label[c] == l).map(|c| lo + c as i64);
                    if atomic {
                        let mut set = AtomSet::from_indices(cells_of);
                        if range.0.is_none() && low_ray == l {
                            set.lower_ray = Some(lo);
                        }
                        if range.1.is_none() && high_ray == l {
                            set.upper_ray = Some(hi);
                        }
                        MeasSet::Atoms(set.normalized())
                    } else {
                        let mut ivs: Vec<Interval> =
                            cells_of.map(|c| Interval::new(c as f64 * h, (c + 1) as f64 * h)).collect();
                        if dlo.is_infinite() && low_ray == l {
                            ivs.push(Interval::new(dlo, lo as f64 * h));
                        }
                        if dhi.is_infinite() && high_ray == l {
                            ivs.push(Interval::new(hi as f64 * h, dhi));
                        }
                        MeasSet::Intervals(merge_intervals(ivs))
                    }
                })
                .collect();
            Labelled { space, sets }
        })
        .boxed()
}

fn symbol_with_sets() -> BoxedStrategy<(Symbol, Labelled)> {
    prop_oneof![any_symbol(), lower_symbol()]
        .prop_flat_map(|s| {
            let space = *s.space();
            (Just(s), labelled_on(space, 2))
        })
        .boxed()
}

// ---------------------------------------------------------------------------
// Properties

fn prop_measure_additive(inst: &Labelled) -> Check {
    let mut union = MeasSet::empty_for(&inst.space);
    let mut total = 0.0;
    for set in &inst.sets {
        ok(set.validate(&inst.space))?;
        total += ok(measure(&inst.space, set))?;
        union = ok(union.union(set))?;
    }
    let m = ok(measure(&inst.space, &union))?;
    ensure(m == total, || format!("μ(∪E) = {m}, Σμ(E) = {total}"))
}

fn prop_measure_zero_iff_empty(inst: &Labelled) -> Check {
    let set = &inst.sets[0];
    let m = ok(measure(&inst.space, set))?;
    ensure((m == 0.0) == set.is_empty(), || format!("μ(E) = {m} but is_empty = {}", set.is_empty()))
}

fn prop_canonicalize_idempotent(f: &MeasFn) -> Check {
    let again = match f {
        MeasFn::Step(s) => MeasFn::Step(ok(StepFn::new(*s.space(), s.breakpoints().to_vec(), s.values().to_vec()))?),
        MeasFn::Atoms(a) => MeasFn::Atoms(ok(AtomSeq::new(*a.space(), a.entries().clone(), a.tail_value()))?),
    };
    ensure(&again == f, || "re-canonicalization changed the function".into())?;
    let json = serde_json::to_string(f).map_err(|e| e.to_string())?;
    let back: MeasFn = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(&back == f, || format!("JSON round trip changed {json}"))?;
    let doubled = ok(add(f, f))?;
    ensure(ok(add(&doubled, &f.scale(-1.0)))? == *f, || "f + f − f ≠ f".into())
}

fn prop_integrate_linear(inst: &((MeasFn, MeasFn), i32, i32)) -> Check {
    let ((f, g), a, b) = inst;
    let (a, b) = (*a as f64 / 4.0, *b as f64 / 4.0);
    let combo = ok(linear_combine(&[a, b], &[f, g]))?;
    match (integrate(f), integrate(g), integrate(&combo)) {
        (Ok(x), Ok(y), Ok(z)) if x.is_finite() && y.is_finite() && z.is_finite() => {
            ensure(z == a * x + b * y, || format!("∫(af + bg) = {z}, a∫f + b∫g = {}", a * x + b * y))
        }
        _ => Ok(()),
    }
}

fn prop_combine_canonical(inst: &((MeasFn, MeasFn), i32, i32)) -> Check {
    let ((f, g), a, b) = inst;
    let combo = ok(linear_combine(&[*a as f64 / 4.0, *b as f64 / 4.0], &[f, g]))?;
    match &combo {
        MeasFn::Step(s) => ensure(s.values().windows(2).all(|w| w[0] != w[1]), || "adjacent equal pieces".into()),
        MeasFn::Atoms(s) => {
            ensure(s.entries().values().all(|&v| v != s.tail_value()), || "entry equal to the tail value".into())
        }
    }
}

fn level_grid(fns: &[&MeasFn]) -> Vec<f64> {
    let mut levels: Vec<f64> = vec![0.0];
    for f in fns {
        levels.extend(f.abs_levels().iter().map(|l| l.0));
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mids: Vec<f64> = levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    levels.extend(mids);
    levels.push(levels.iter().copied().fold(0.0, f64::max) + 1.0);
    levels
}

fn prop_equimeasurability(f: &MeasFn) -> Check {
    let r = rearrangement(f);
    for s in level_grid(&[f]) {
        let a = ok(distribution_at(f, s))?;
        let b = r.distribution_at(s);
        ensure(a == b, || format!("μ(|f| > {s}) = {a} but μ(f* > {s}) = {b}"))?;
    }
    Ok(())
}

fn sum_rearranged(a: &Rearranged, b: &Rearranged) -> std::result::Result<MeasFn, String> {
    Ok(MeasFn::Step(ok(StepFn::zip_with(&[a.as_step(), b.as_step()], |v| v[0] + v[1]))?))
}

fn prop_quasi_subadditive(inst: &(MeasFn, MeasFn)) -> Check {
    let (f, g) = inst;
    let lhs = rearrangement(&ok(add(f, g))?).to_measfn();
    let rhs = sum_rearranged(&ok(rearrangement(f).dilate(0.5))?, &ok(rearrangement(g).dilate(0.5))?)?;
    ensure(ok(pointwise_leq(&lhs, &rhs))?, || "(f+g)*(t) > f*(t/2) + g*(t/2) somewhere".into())
}

fn prop_hardy_integral_subadditive(inst: &(MeasFn, MeasFn)) -> Check {
    let (f, g) = inst;
    let sum = ok(add(f, g))?;
    let mut ts: Vec<f64> = [f, g, &sum].iter().flat_map(|h| rearrangement(h).breakpoints().to_vec()).collect();
    ts.extend([0.5, 1.0, 3.0, 100.0]);
    for t in ts {
        let (a, b, c) = (ok(hardy_integral(&sum, t))?, ok(hardy_integral(f, t))?, ok(hardy_integral(g, t))?);
        ensure(a <= b + c, || format!("∫₀^{t} (f+g)* = {a} > {b} + {c}"))?;
    }
    Ok(())
}

fn prop_hardy_lemma(inst: &((MeasFn, MeasFn), XiWeight)) -> Check {
    let ((f, g), w) = inst;
    ensure(hlp_leq(f, g), || "the averaged pair is not HLP-ordered".into())?;
    let a = ok(integrate_product(&rearrangement(f), w.weight()))?;
    let b = ok(integrate_product(&rearrangement(g), w.weight()))?;
    ensure(a <= b, || format!("∫f*w = {a} > ∫g*w = {b}"))
}

fn prop_dilate_composition(inst: &(MeasFn, i32, i32)) -> Check {
    let (f, i, j) = inst;
    let (a, b) = (2f64.powi(*i), 2f64.powi(*j));
    let r = rearrangement(f);
    let lhs = ok(ok(r.dilate(a))?.dilate(b))?;
    let rhs = ok(r.dilate(a * b))?;
    ensure(lhs == rhs, || format!("D_{b} D_{a} f* ≠ D_{} f*", a * b))
}

fn is_nonincreasing_half_line(f: &MeasFn) -> bool {
    f.space() == &MeasureSpace::half_line()
        && f.as_step().is_some_and(|s| s.values().iter().all(|&v| v >= 0.0) && s.values().windows(2).all(|w| w[1] <= w[0]))
}

fn prop_hardy_littlewood(inst: &(MeasFn, MeasFn)) -> Check {
    let (f, g) = inst;
    let (lhs, rhs) = ok(hardy_littlewood_pair(f, g))?;
    ensure(lhs <= rhs, || format!("∫|fg| = {lhs} > ∫f*g* = {rhs}"))?;
    if is_nonincreasing_half_line(f) && is_nonincreasing_half_line(g) {
        ensure(lhs == rhs, || format!("similarly ordered pair gives {lhs} < {rhs}"))?;
    }
    Ok(())
}

fn prop_norm_lattice(inst: &(MeasFn, MeasFn, NormSpec)) -> Check {
    let (f, g, spec) = inst;
    let spec = spec.with_space(*f.space());
    let (rf, rg) = (rearrangement(f).to_measfn(), rearrangement(g).to_measfn());
    ensure(ok(pointwise_leq(&rf, &rg))?, || "premise f* ≤ g* fails".into())?;
    let (a, b) = (ok(norm_eval(&spec, f))?, ok(norm_eval(&spec, g))?);
    ensure(norm_leq(a, b), || format!("{}: ‖f‖ = {a} > ‖g‖ = {b}", spec.label()))
}

fn prop_norm_rearrangement_invariant(inst: &(Symbol, MeasFn)) -> Check {
    let (phi, f) = inst;
    let g = ok(apply(phi, f))?;
    ensure(equimeasurable(f, &g), || "a measure-preserving map changed f*".into())?;
    let r = rearrangement(f).to_measfn();
    for kind in [
        NormKind::Lp { p: 2.0 },
        NormKind::Lorentz { p: 2.0, q: 1.0 },
        NormKind::MarcWeak { phi: QuasiconcaveFn::LogClip },
        NormKind::MarcStrong { phi: QuasiconcaveFn::power(0.5).expect("valid") },
    ] {
        let spec = ok(NormSpec::new(kind, *f.space()))?;
        let (a, b) = (ok(norm_eval(&spec, f))?, ok(norm_eval(&spec, &g))?);
        let c = ok(norm_eval(&spec.with_space(MeasureSpace::half_line()), &r))?;
        ensure(a == b && b == c, || format!("{}: {a}, {b}, {c} differ", spec.label()))?;
    }
    Ok(())
}

fn prop_xi_triangle(inst: &((MeasFn, MeasFn), XiWeight)) -> Check {
    let ((f, g), w) = inst;
    let lhs = ok(xi_seminorm(w, &ok(add(f, g))?))?;
    let (a, b) = (ok(xi_seminorm(w, f))?, ok(xi_seminorm(w, g))?);
    ensure(lhs <= a + b, || format!("|f+g|_w = {lhs} > {a} + {b}"))
}

fn prop_xi_hl_consistency(inst: &(MeasFn, XiWeight)) -> Check {
    let (f, w) = inst;
    let xi = ok(xi_seminorm(w, f))?;
    let (lhs, rhs) = ok(hardy_littlewood_pair(f, &w.weight().to_measfn()))?;
    ensure(rhs == xi, || format!("∫w f* = {rhs} but |f|_w = {xi}"))?;
    ensure(lhs <= xi, || format!("∫|f|w = {lhs} > |f|_w = {xi}"))
}

fn prop_hlp_norm_monotone(inst: &((MeasFn, MeasFn), NormSpec)) -> Check {
    let ((f, g), spec) = inst;
    let spec = spec.with_space(*f.space());
    ensure(hlp_leq(f, g), || "the averaged pair is not HLP-ordered".into())?;
    let (a, b) = (ok(norm_eval(&spec, f))?, ok(norm_eval(&spec, g))?);
    ensure(norm_leq(a, b), || format!("{}: ‖f‖ = {a} > ‖g‖ = {b}", spec.label()))
}

fn prop_dilation_contraction(inst: &(MeasFn, NormSpec, i32, u32)) -> Check {
    let (f, spec, k, frac) = inst;
    let t = 2f64.powi(*k) * (1.0 + *frac as f64 / 4.0);
    let r = rearrangement(f);
    let d = ok(r.dilate(t))?;
    let (a, b) = (spec.eval_rearranged(&d), spec.eval_rearranged(&r));
    ensure(norm_leq(a, b), || format!("{}: ‖D_{t} f*‖ = {a} > ‖f*‖ = {b}", spec.label()))
}

fn prop_marc_strong_dominates_weak(inst: &(MeasFn, QuasiconcaveFn)) -> Check {
    let (f, phi) = inst;
    let r = rearrangement(f);
    let weak = ok(NormSpec::marc_weak(phi.clone(), MeasureSpace::half_line()))?.eval_rearranged(&r);
    let strong = ok(NormSpec::marc_strong(phi.clone(), MeasureSpace::half_line()))?.eval_rearranged(&r);
    ensure(norm_leq(weak, strong), || format!("m = {weak} > M = {strong}"))
}

fn upper_estimate(tf: &MeasFn, f: &MeasFn, a: f64) -> Check {
    let lhs = rearrangement(tf).to_measfn();
    if a == 0.0 {
        return ensure(lhs.is_zero(), || "A = 0 but T f ≠ 0".into());
    }
    let rhs = ok(rearrangement(f).dilate(1.0 / a))?.to_measfn();
    ensure(ok(pointwise_leq(&lhs, &rhs))?, || format!("(Tf)*(t) > f*(t/{a}) somewhere"))
}

fn prop_dilation_upper(inst: &(Symbol, MeasFn)) -> Check {
    let (phi, f) = inst;
    let a = measure_bound(phi);
    ensure(a.is_finite(), || format!("catalog bound {a} is not finite"))?;
    upper_estimate(&ok(apply(phi, f))?, f, a)
}

fn prop_dilation_lower(inst: &(Symbol, MeasFn)) -> Check {
    let (phi, f) = inst;
    let c = lower_bound(phi);
    ensure(c.is_finite() && c > 0.0, || format!("catalog lower bound {c} is not finite"))?;
    let lhs = rearrangement(&ok(apply(phi, f))?).to_measfn();
    let rhs = ok(rearrangement(f).dilate(c))?.to_measfn();
    ensure(ok(pointwise_leq(&rhs, &lhs))?, || format!("(Tf)*(t) < f*({c}t) somewhere"))
}

fn exact_power_bound(phi: &Symbol, k: u32) -> std::result::Result<f64, String> {
    let pb = ok(power_measure_bound(phi, k))?;
    let entry = pb.per_n.last().ok_or("empty power bound")?;
    if !entry.exact || !entry.value.is_finite() {
        return fail(format!("A_{k} = {} is not exact and finite", entry.value));
    }
    Ok(entry.value)
}

fn prop_dilation_power(inst: &((Symbol, MeasFn), u32)) -> Check {
    let ((phi, f), k) = inst;
    let a = exact_power_bound(phi, *k)?;
    let tf = ok(crate::ergodic::iterate(phi, f, *k))?;
    upper_estimate(&tf, f, a)
}

fn atoms_disjoint(a: &AtomSet, b: &AtomSet) -> bool {
    let rays_meet = |lower: Option<i64>, upper: Option<i64>| matches!((lower, upper), (Some(l), Some(u)) if u < l);
    a.indices.iter().all(|&j| !b.contains(j))
        && b.indices.iter().all(|&j| !a.contains(j))
        && !(a.lower_ray.is_some() && b.lower_ray.is_some())
        && !(a.upper_ray.is_some() && b.upper_ray.is_some())
        && !rays_meet(a.lower_ray, b.upper_ray)
        && !rays_meet(b.lower_ray, a.upper_ray)
}

fn prop_preimage_disjoint_union(inst: &(Symbol, Labelled)) -> Check {
    let (phi, sets) = inst;
    let (e, f) = (&sets.sets[0], &sets.sets[1]);
    let space = phi.space();
    let pe = ok(preimage(phi, e))?;
    let pf = ok(preimage(phi, f))?;
    let pu = ok(preimage(phi, &ok(e.union(f))?))?;
    match (&pe, &pf, &pu) {
        (MeasSet::Atoms(a), MeasSet::Atoms(b), MeasSet::Atoms(u)) => {
            ensure(atoms_disjoint(a, b), || "φ⁻¹E and φ⁻¹F overlap".into())?;
            let joined = ok(pe.union(&pf))?;
            ensure(joined == MeasSet::Atoms(u.clone().normalized()), || "φ⁻¹(E ∪ F) ≠ φ⁻¹E ∪ φ⁻¹F".into())
        }
        _ => {
            let (ce, cf, cu) = (ok(indicator(space, &pe))?, ok(indicator(space, &pf))?, ok(indicator(space, &pu))?);
            let both = ok(MeasFn::zip_with(&[&ce, &cf], |v| v[0] * v[1]))?;
            ensure(both.is_zero(), || "φ⁻¹E and φ⁻¹F overlap".into())?;
            ensure(ok(add(&ce, &cf))? == cu, || "φ⁻¹(E ∪ F) ≠ φ⁻¹E ∪ φ⁻¹F".into())
        }
    }
}

fn prop_iterate_identity(inst: &((Symbol, MeasFn), u32)) -> Check {
    let ((phi, f), k) = inst;
    let Symbol::Atomic(s) = phi else { return fail("expected an atomic symbol") };
    let power: AtomicSymbol = ok(s.iterate(*k))?;
    let lhs = ok(crate::ergodic::iterate(phi, f, *k))?;
    let rhs = ok(apply(&Symbol::Atomic(power), f))?;
    ensure(lhs == rhs, || format!("T_φ^{k} f ≠ T_(φ^{k}) f"))
}

fn prop_power_bound_transfer(inst: &((Symbol, MeasFn), u32, NormSpec)) -> Check {
    let ((phi, f), k, spec) = inst;
    let a = exact_power_bound(phi, *k)?;
    let tf = ok(crate::ergodic::iterate(phi, f, *k))?;
    let lhs = spec.eval_rearranged(&rearrangement(&tf));
    let rhs = if a == 0.0 { 0.0 } else { spec.eval_rearranged(&ok(rearrangement(f).dilate(1.0 / a))?) };
    ensure(norm_leq(lhs, rhs), || format!("{}: ‖T^{k} f‖ = {lhs} > ‖D_(1/A) f*‖ = {rhs}", spec.label()))
}

fn prop_cesaro_hlp(inst: &(Symbol, MeasFn, u64)) -> Check {
    let (phi, f, n) = inst;
    let horizon = (*n as u32).saturating_sub(1).max(1);
    let pb = ok(power_measure_bound(phi, horizon))?;
    ensure(pb.sup_exact && pb.sup.is_finite(), || format!("power bound {} is not exact and finite", pb.sup))?;
    let b = if pb.sup <= 1.0 { 1.0 } else { 1.0 / pb.sup };
    // compare Σ_{i<n} T^i f with n·D_B f* to keep the check exact
    let sum = rearrangement(&ok(cesaro_sum(phi, f, *n))?);
    let bound = ok(ok(rearrangement(f).dilate(b))?.scale(*n as f64))?;
    ensure(hlp_leq_rearranged(&sum, &bound), || format!("C_{n} f is not majorized by D_{b} f*"))
}

fn prop_injectivity_estimate(inst: &((Symbol, MeasFn), NormSpec)) -> Check {
    let ((phi, f), spec) = inst;
    let c = lower_bound(phi);
    ensure(c.is_finite() && c > 0.0, || format!("catalog lower bound {c} is not finite"))?;
    let tf = ok(apply(phi, f))?;
    ensure(tf.is_zero() == f.is_zero(), || "T_φ is not injective on this f".into())?;
    let lhs = rearrangement(&tf);
    let rhs = ok(rearrangement(f).dilate(c))?;
    ensure(ok(pointwise_leq(&rhs.to_measfn(), &lhs.to_measfn()))?, || format!("(Tf)*(t) < f*({c}t) somewhere"))?;
    let (a, b) = (spec.eval_rearranged(&rhs), spec.eval_rearranged(&lhs));
    ensure(norm_leq(a, b), || format!("{}: ‖D_C f*‖ = {a} > ‖Tf‖ = {b}", spec.label()))
}

fn prop_maximal_domination(inst: &((Symbol, MeasFn), u64)) -> Check {
    let ((phi, f), k) = inst;
    let m = ok(maximal_truncated(phi, f, *k))?;
    let next = ok(maximal_truncated(phi, f, k + 1))?;
    ensure(ok(pointwise_leq(&m, &next))?, || format!("T#_{k} f ≰ T#_{} f", k + 1))?;
    for n in 1..=*k {
        let c = ok(cesaro(phi, &f.abs(), n))?;
        ensure(ok(pointwise_leq(&c, &m))?, || format!("C_{n}|f| ≰ T#_{k} f"))?;
        let signed = ok(cesaro(phi, f, n))?.abs();
        ensure(ok(pointwise_leq(&signed, &m))?, || format!("|C_{n} f| ≰ T#_{k} f"))?;
    }
    Ok(())
}

fn prop_permutation_mean_ergodic(inst: &(Symbol, MeasFn, u64)) -> Check {
    let (phi, f, n) = inst;
    let (Symbol::Atomic(s), MeasFn::Atoms(seq)) = (phi, f) else { return fail("expected a permutation") };
    let limit = ok(permutation_limit(s, seq))?;
    ensure(ok(apply(phi, &limit.clone().into()))? == MeasFn::Atoms(limit.clone()), || "Tf is not invariant".into())?;
    let d = ok(decomposition_check(s, seq))?;
    ensure(d.verified, || "decomposition witness does not solve (I − T)g = f − Tf".into())?;
    let cycles = ok(crate::symbols::permutation_cycles(s))?;
    let longest = cycles.iter().map(Vec::len).max().unwrap_or(1) as f64;
    let sup = seq.entries().values().fold(0.0f64, |m, v| m.max(v.abs()));
    // exact form of ‖C_n f − Tf‖_∞ ≤ 2L‖f‖_∞/n, scaled by n and the cycle length
    let sum = ok(cesaro_sum(phi, f, *n))?;
    for cycle in &cycles {
        let len = cycle.len() as f64;
        let total: f64 = cycle.iter().map(|&j| seq.get(j as i64)).sum();
        for &j in cycle {
            let lhs = (len * ok(sum.eval(j as f64))? - *n as f64 * total).abs();
            let rhs = 2.0 * longest * sup * len;
            ensure(lhs <= rhs, || format!("at atom {j}: n·L_c·|C_n f − Tf| = {lhs} > {rhs}"))?;
        }
    }
    Ok(())
}

fn prop_weak_type_hopf(inst: &((Symbol, MeasFn), u64)) -> Check {
    let ((phi, f), k) = inst;
    if f.is_zero() {
        return Ok(());
    }
    let spec = ok(NormSpec::lp(1.0, *f.space()))?;
    let l1 = ok(norm_eval(&spec, f))?;
    if !l1.is_finite() {
        return Ok(());
    }
    let top = rearrangement(f).sup();
    let grid: Vec<f64> = (1..=16).map(|i| top * i as f64 / 16.0).collect();
    let ratio = ok(weak_type_ratio(phi, f, *k, &spec, &grid))?;
    ensure(ratio <= 1.0 + 1e-12, || format!("weak-type ratio {ratio} exceeds 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_property_passes_a_short_run() {
        let summary = verify_suite(7, 16, false);
        for p in &summary.properties {
            assert!(p.failure.is_none(), "{}: {:?}", p.name, p.failure);
            assert_eq!(p.passed, 16);
        }
        assert_eq!(summary.properties.len(), PROPERTIES.len());
    }

    #[test]
    fn injected_violation_is_reported_and_shrunk() {
        let summary = verify_suite(42, 32, true);
        assert_eq!(summary.failures, 1);
        let bad = summary.properties.iter().find(|p| p.name == SELF_TEST).unwrap();
        let failure = bad.failure.as_ref().unwrap();
        let f: MeasFn = serde_json::from_value(failure.instance.clone()).unwrap();
        // shrinking drives the witness down to the threshold value itself
        assert_eq!(rearrangement(&f).sup(), 1.0);
    }

    #[test]
    fn deterministic_and_single_trial() {
        let a = run_property("cesaro_hlp", 3, 1).unwrap();
        let b = run_property("cesaro_hlp", 3, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cases, 1);
        assert!(run_property("no_such_property", 3, 1).is_none());
    }
}
