//! Worked examples across modules, checked against hand-computed values,
//! plus invariants over random dyadic step functions.

use proptest::prelude::*;
use ri_ergodic::ergodic::{cesaro, maximal_truncated, permutation_limit};
use ri_ergodic::rearrange::{equimeasurable, hardy_littlewood_pair, rearrangement};
use ri_ergodic::spaces::norm_eval;
use ri_ergodic::symbols::{apply, measure_bound, permutation_cycles, power_measure_bound, preimage};
use ri_ergodic::{indicator, measure, AtomSeq, MeasFn, MeasSet, MeasureSpace, NormSpec, Rearranged, StepFn, Symbol};
use std::collections::BTreeMap;

fn line_step(breaks: &[f64], values: &[f64]) -> MeasFn {
    StepFn::new(MeasureSpace::line(), breaks.to_vec(), values.to_vec()).unwrap().into()
}

fn sample() -> MeasFn {
    line_step(&[0.0, 1.0, 1.5, 2.0, 4.0], &[0.0, 1.0, 3.0, 0.0, 2.0, 0.0])
}

#[test]
fn rearrangement_of_a_three_level_step() {
    let r = rearrangement(&sample());
    assert_eq!(r, Rearranged::from_widths(&[(0.5, 3.0), (2.0, 2.0), (1.0, 1.0)], 0.0).unwrap());
    assert_eq!(r.breakpoints(), &[0.5, 2.5, 3.5]);
    assert_eq!(r.integral_to(1.0), 2.5);
}

#[test]
fn norms_of_the_sample() {
    let f = sample();
    let line = MeasureSpace::line();
    assert_eq!(norm_eval(&NormSpec::lp(1.0, line).unwrap(), &f).unwrap(), 6.5);
    assert_eq!(norm_eval(&NormSpec::lp(f64::INFINITY, line).unwrap(), &f).unwrap(), 3.0);
    assert_eq!(norm_eval(&NormSpec::lp(2.0, line).unwrap(), &f).unwrap(), 13.5f64.sqrt());
}

#[test]
fn translation_moves_supports() {
    let line = MeasureSpace::line();
    let f = indicator(&line, &MeasSet::interval(0.0, 1.0)).unwrap();
    let g = apply(&Symbol::translation(-1.0).unwrap(), &f).unwrap();
    assert_eq!(g, indicator(&line, &MeasSet::interval(1.0, 2.0)).unwrap());
    assert!(equimeasurable(&f, &g));
    let c = cesaro(&Symbol::translation(-1.0).unwrap(), &f, 4).unwrap();
    assert_eq!(c, indicator(&line, &MeasSet::interval(0.0, 4.0)).unwrap().scale(0.25));
}

#[test]
fn preimages_of_catalog_maps() {
    let unit = MeasureSpace::unit_interval();
    let half = preimage(&Symbol::doubling_map(), &MeasSet::interval(0.0, 0.5)).unwrap();
    assert_eq!(measure(&unit, &half).unwrap(), 0.5);
    let root = preimage(&Symbol::power_on_unit(2).unwrap(), &MeasSet::interval(0.0, 0.25)).unwrap();
    assert_eq!(root, MeasSet::interval(0.0, 0.5));
    let shifted = preimage(&Symbol::backward_shift_absorbing(), &MeasSet::atoms([0])).unwrap();
    assert_eq!(measure(&MeasureSpace::naturals(), &shifted).unwrap(), 2.0);
}

#[test]
fn measure_bounds() {
    assert_eq!(measure_bound(&Symbol::translation(3.0).unwrap()), 1.0);
    assert_eq!(measure_bound(&Symbol::doubling_map()), 1.0);
    assert_eq!(measure_bound(&Symbol::power_on_unit(2).unwrap()), f64::INFINITY);
    assert_eq!(measure_bound(&Symbol::affine_line(0.5, 0.0).unwrap()), 2.0);
    let pb = power_measure_bound(&Symbol::backward_shift_absorbing(), 4).unwrap();
    assert_eq!((1..=4).map(|n| pb.at(n).unwrap()).collect::<Vec<_>>(), vec![2.0, 3.0, 4.0, 5.0]);
}

#[test]
fn permutation_averages_over_cycles() {
    let phi = Symbol::permutation(vec![1, 2, 0, 4, 3, 5]).unwrap();
    let Symbol::Atomic(sigma) = &phi else { unreachable!() };
    let mut lengths: Vec<usize> = permutation_cycles(sigma).unwrap().iter().map(Vec::len).collect();
    lengths.sort();
    assert_eq!(lengths, vec![1, 2, 3]);
    let f = AtomSeq::from_values(*phi.space(), &[3.0, 0.0, 0.0, 1.0, 0.0, 5.0]).unwrap();
    let limit = permutation_limit(sigma, &f).unwrap();
    let expect = AtomSeq::from_values(*phi.space(), &[1.0, 1.0, 1.0, 0.5, 0.5, 5.0]).unwrap();
    assert_eq!(limit, expect);
}

#[test]
fn maximal_function_of_the_unilateral_shift() {
    let n = MeasureSpace::naturals();
    let f: MeasFn = AtomSeq::new(n, BTreeMap::from([(2, 4.0)]), 0.0).unwrap().into();
    let m = maximal_truncated(&Symbol::unilateral_shift(), &f, 4).unwrap();
    let MeasFn::Atoms(m) = m else { panic!("atomic input gives an atomic maximal function") };
    let got: Vec<f64> = (0..4).map(|j| m.get(j)).collect();
    assert_eq!(got, vec![4.0 / 3.0, 2.0, 4.0, 0.0]);
}

fn dyadic_step() -> impl Strategy<Value = MeasFn> {
    (1usize..8).prop_flat_map(|k| {
        (prop::collection::btree_set(-64i32..64, k + 1), prop::collection::vec(-16i32..16, k)).prop_map(|(b, v)| {
            let breaks: Vec<f64> = b.into_iter().map(|x| x as f64 / 8.0).collect();
            let mut values = vec![0.0];
            values.extend(v.into_iter().map(|x| x as f64 / 4.0));
            values.push(0.0);
            line_step(&breaks, &values)
        })
    })
}

proptest! {
    #[test]
    fn rearrangement_is_equimeasurable_and_nonincreasing(f in dyadic_step()) {
        let r = rearrangement(&f);
        prop_assert!(equimeasurable(&f, &r.to_measfn()));
        prop_assert!(r.values().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn translations_preserve_norms(f in dyadic_step(), beta in -32i32..32, p in 1u32..4) {
        let phi = Symbol::translation(beta as f64 / 8.0).unwrap();
        let g = apply(&phi, &f).unwrap();
        prop_assert_eq!(rearrangement(&g), rearrangement(&f));
        let spec = NormSpec::lp(p as f64, MeasureSpace::line()).unwrap();
        prop_assert_eq!(norm_eval(&spec, &g).unwrap(), norm_eval(&spec, &f).unwrap());
    }

    #[test]
    fn hardy_littlewood(f in dyadic_step(), g in dyadic_step()) {
        let (lhs, rhs) = hardy_littlewood_pair(&f, &g).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn cesaro_mean_is_bounded_by_sup(f in dyadic_step(), n in 1u64..32) {
        let c = cesaro(&Symbol::translation(-0.5).unwrap(), &f, n).unwrap();
        prop_assert!(rearrangement(&c).sup() <= rearrangement(&f).sup());
    }
}
