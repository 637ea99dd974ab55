//! Catalog of measurable self-maps with exact preimages, and the
//! measure-bound diagnostics that govern their composition operators.

use crate::error::{Error, Result};
use crate::json::ExtReal;
use crate::measure_space::{measure, AtomSet, Interval, MeasSet, MeasureSpace, SpaceKind};
use crate::spaces::AnalyticProfile;
use crate::stepfn::{indicator, linear_combine, AtomSeq, MeasFn, StepFn};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Monotone branch forms with closed-form inverses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchForm {
    /// `t ↦ slope·t + offset`, `slope ≠ 0`.
    Affine { slope: f64, offset: f64 },
    /// `t ↦ tⁿ` on `[0, 1)`.
    #[serde(rename = "power")]
    PowerOnUnit(u32),
    /// `t ↦ 1 + tⁿ` on `[0, 1)`.
    ShiftedPower(u32),
    /// `t ↦ n(t − 1) + 2` on `[1, ∞)`.
    AffineTail(u32),
    /// `t ↦ exp(1 − 1/t)` on `[0, 1)`, with `0 ↦ 0`.
    ExpRecip,
}

fn root(y: f64, n: u32) -> f64 {
    match n {
        1 => y,
        2 => y.sqrt(),
        3 => y.cbrt(),
        _ => y.powf(1.0 / n as f64),
    }
}

impl BranchForm {
    fn validate(&self) -> Result<()> {
        match *self {
            BranchForm::Affine { slope, offset } => {
                if slope == 0.0 || !slope.is_finite() || !offset.is_finite() {
                    return Err(Error::InvalidSymbol(format!("affine map needs finite nonzero slope, got {slope}")));
                }
            }
            BranchForm::PowerOnUnit(n) if n < 2 => {
                return Err(Error::InvalidSymbol(format!("power exponent {n} must be at least 2")))
            }
            BranchForm::ShiftedPower(0) | BranchForm::AffineTail(0) => {
                return Err(Error::InvalidSymbol("exponent must be positive".into()))
            }
            _ => {}
        }
        Ok(())
    }

    pub fn forward(&self, x: f64) -> f64 {
        match *self {
            BranchForm::Affine { slope, offset } => slope * x + offset,
            BranchForm::PowerOnUnit(n) => x.powi(n as i32),
            BranchForm::ShiftedPower(n) => 1.0 + x.powi(n as i32),
            BranchForm::AffineTail(n) => n as f64 * (x - 1.0) + 2.0,
            BranchForm::ExpRecip => {
                if x <= 0.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / x).exp()
                }
            }
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            BranchForm::Affine { slope, offset } => (y - offset) / slope,
            BranchForm::PowerOnUnit(n) => root(y.max(0.0), n),
            BranchForm::ShiftedPower(n) => root((y - 1.0).max(0.0), n),
            BranchForm::AffineTail(n) => (y - 2.0) / n as f64 + 1.0,
            BranchForm::ExpRecip => {
                if y <= 0.0 {
                    0.0
                } else {
                    1.0 / (1.0 - y.ln())
                }
            }
        }
    }

    pub fn increasing(&self) -> bool {
        !matches!(self, BranchForm::Affine { slope, .. } if *slope < 0.0)
    }

    /// `|(inverse)'(y)|`, the density of the preimage measure on the image.
    pub fn inverse_derivative(&self, y: f64) -> f64 {
        match *self {
            BranchForm::Affine { slope, .. } => 1.0 / slope.abs(),
            BranchForm::AffineTail(n) => 1.0 / n as f64,
            BranchForm::PowerOnUnit(n) => (y.max(0.0)).powf(1.0 / n as f64 - 1.0) / n as f64,
            BranchForm::ShiftedPower(n) => ((y - 1.0).max(0.0)).powf(1.0 / n as f64 - 1.0) / n as f64,
            BranchForm::ExpRecip => {
                if y <= 0.0 {
                    f64::INFINITY
                } else {
                    let l = 1.0 - y.ln();
                    1.0 / (y * l * l)
                }
            }
        }
    }


    fn natural_domain(&self) -> (f64, f64) {
        match self {
            BranchForm::Affine { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            BranchForm::AffineTail(_) => (1.0, f64::INFINITY),
            _ => (0.0, 1.0),
        }
    }

    fn slope(&self) -> Option<f64> {
        match *self {
            BranchForm::Affine { slope, .. } => Some(slope),
            BranchForm::AffineTail(n) => Some(n as f64),
            _ => None,
        }
    }
}

/// One monotone piece of an [`IntervalSymbol`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    #[serde(with = "interval_pair")]
    pub domain: Interval,
    pub form: BranchForm,
}

mod interval_pair {
    use super::ExtReal;
    use crate::measure_space::Interval;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(iv: &Interval, s: S) -> Result<S::Ok, S::Error> {
        (ExtReal(iv.lo), ExtReal(iv.hi)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Interval, D::Error> {
        let (lo, hi) = <(ExtReal, ExtReal)>::deserialize(d)?;
        Ok(Interval::new(lo.0, hi.0))
    }
}

impl Branch {
    pub fn new(lo: f64, hi: f64, form: BranchForm) -> Self {
        Branch { domain: Interval::new(lo, hi), form }
    }

    /// `[c, d)` with `c ≤ d`, the image of the domain.
    pub fn image(&self) -> (f64, f64) {
        let a = self.form.forward(self.domain.lo);
        let b = self.form.forward(self.domain.hi);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// A piecewise monotone self-map of a Lebesgue space.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSymbol {
    space: MeasureSpace,
    branches: Vec<Branch>,
}

impl IntervalSymbol {
    /// Branch domains must tile the space's domain from left to right and
    /// every branch must map into the domain.
    pub fn new(space: MeasureSpace, branches: Vec<Branch>) -> Result<Self> {
        let (lo, hi) =
            space.domain().ok_or_else(|| Error::InvalidSymbol("interval symbols need a Lebesgue space".into()))?;
        if branches.is_empty() {
            return Err(Error::InvalidSymbol("no branches".into()));
        }
        let mut cursor = lo;
        for b in &branches {
            b.form.validate()?;
            if b.domain.lo != cursor || !(b.domain.lo < b.domain.hi) {
                return Err(Error::InvalidSymbol(format!(
                    "branch domain [{}, {}) does not continue the tiling at {cursor}",
                    b.domain.lo, b.domain.hi
                )));
            }
            let (nlo, nhi) = b.form.natural_domain();
            if b.domain.lo < nlo || b.domain.hi > nhi {
                return Err(Error::InvalidSymbol(format!(
                    "branch domain [{}, {}) leaves the form's domain [{nlo}, {nhi}]",
                    b.domain.lo, b.domain.hi
                )));
            }
            let (c, d) = b.image();
            if c < lo || d > hi || c.is_nan() || d.is_nan() {
                return Err(Error::InvalidSymbol(format!("branch image [{c}, {d}) leaves the space")));
            }
            cursor = b.domain.hi;
        }
        if cursor != hi {
            return Err(Error::InvalidSymbol(format!("branches stop at {cursor}, the domain ends at {hi}")));
        }
        Ok(IntervalSymbol { space, branches })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn eval(&self, x: f64) -> f64 {
        let b = self.branches.iter().find(|b| x < b.domain.hi).unwrap_or_else(|| self.branches.last().unwrap());
        b.form.forward(x)
    }

    fn is_affine(&self) -> bool {
        self.branches.iter().all(|b| b.form.slope().is_some())
    }

    /// `f ∘ φ`, assembled branch by branch from inverse images of the
    /// breakpoints of `f`.
    pub fn compose(&self, f: &StepFn) -> Result<StepFn> {
        if f.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let fb = f.breakpoints();
        let fv = f.values();
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        for (k, b) in self.branches.iter().enumerate() {
            if k > 0 {
                bps.push(b.domain.lo);
            }
            let (c, d) = b.image();
            let first = fb.partition_point(|&t| t <= c);
            let last = fb.partition_point(|&t| t < d);
            let ts = &fb[first..last.max(first)];
            let seg_vals = &fv[first..=last.max(first)];
            let clamp = |x: f64| x.clamp(b.domain.lo, b.domain.hi);
            if b.form.increasing() {
                bps.extend(ts.iter().map(|&t| clamp(b.form.inverse(t))));
                vals.extend_from_slice(seg_vals);
            } else {
                bps.extend(ts.iter().rev().map(|&t| clamp(b.form.inverse(t))));
                vals.extend(seg_vals.iter().rev());
            }
        }
        Ok(StepFn::assemble(self.space, bps, vals))
    }

    /// The transfer operator `P u(y) = Σ_b u(b⁻¹y)/|b'|` on the images, for
    /// symbols whose branches are all affine.
    fn transfer(&self, u: &StepFn) -> Result<StepFn> {
        let mut parts = Vec::with_capacity(self.branches.len());
        let mut coeffs = Vec::with_capacity(self.branches.len());
        for b in &self.branches {
            let slope = b.form.slope().ok_or_else(|| Error::NotClosedForm("non-affine branch".into()))?;
            let (c, d) = b.image();
            let ub = u.breakpoints();
            let first = ub.partition_point(|&t| t <= b.domain.lo);
            let last = ub.partition_point(|&t| t < b.domain.hi);
            let ts = &ub[first..last.max(first)];
            let seg_vals = &u.values()[first..=last.max(first)];
            let mut bps = vec![c];
            let mut vals = vec![0.0];
            if slope > 0.0 {
                bps.extend(ts.iter().map(|&t| b.form.forward(t).clamp(c, d)));
                vals.extend_from_slice(seg_vals);
            } else {
                bps.extend(ts.iter().rev().map(|&t| b.form.forward(t).clamp(c, d)));
                vals.extend(seg_vals.iter().rev());
            }
            bps.push(d);
            vals.push(0.0);
            parts.push(MeasFn::Step(StepFn::assemble(self.space, bps, vals)));
            coeffs.push(1.0 / slope.abs());
        }
        let refs: Vec<&MeasFn> = parts.iter().collect();
        match linear_combine(&coeffs, &refs)? {
            MeasFn::Step(s) => Ok(s),
            MeasFn::Atoms(_) => unreachable!("Lebesgue space"),
        }
    }

    /// Image endpoints together with the domain ends, sorted.
    fn cells(&self) -> Vec<f64> {
        let (lo, hi) = self.space.domain().expect("Lebesgue space");
        let mut pts = vec![lo, hi];
        for b in &self.branches {
            let (c, d) = b.image();
            pts.push(c);
            pts.push(d);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn covering(&self, c: f64, d: f64) -> Vec<BranchForm> {
        self.branches
            .iter()
            .filter(|b| {
                let (bc, bd) = b.image();
                bc <= c && d <= bd
            })
            .map(|b| b.form)
            .collect()
    }
}

fn density_sum(forms: &[BranchForm], y: f64) -> f64 {
    forms.iter().map(|f| f.inverse_derivative(y)).sum()
}

const MAX_TABLE: i64 = 1 << 24;

/// A self-map of an atomic space: an explicit table on the window `[0, N)`
/// and the shift `j ↦ j + shift` everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSymbol {
    space: MeasureSpace,
    table: Vec<i64>,
    shift: i64,
}

impl AtomicSymbol {
    pub fn new(space: MeasureSpace, table: Vec<i64>, shift: i64) -> Result<Self> {
        let (lo, hi) =
            space.index_range().ok_or_else(|| Error::InvalidSymbol("atomic symbols need an atomic space".into()))?;
        let n = table.len() as i64;
        for (j, &v) in table.iter().enumerate() {
            if !space.contains_index(v) {
                return Err(Error::InvalidSymbol(format!("table maps {j} to {v}, outside the space")));
            }
        }
        match (lo, hi) {
            (Some(_), Some(count)) => {
                if n != count {
                    return Err(Error::InvalidSymbol(format!("a finite space needs a full table of {count} entries")));
                }
                if shift != 0 {
                    return Err(Error::InvalidSymbol("a finite space has no tail rule".into()));
                }
            }
            (Some(l), None) => {
                if n.checked_add(shift).is_none_or(|v| v < l) {
                    return Err(Error::InvalidSymbol(format!("the shift {shift} maps index {n} below {l}")));
                }
            }
            _ => {}
        }
        if shift.unsigned_abs() > (1 << 40) || n > MAX_TABLE {
            return Err(Error::InvalidSymbol("table or shift too large".into()));
        }
        Ok(AtomicSymbol { space, table, shift })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn table(&self) -> &[i64] {
        &self.table
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn map(&self, j: i64) -> i64 {
        if j >= 0 && (j as usize) < self.table.len() {
            self.table[j as usize]
        } else {
            j + self.shift
        }
    }

    fn window(&self) -> i64 {
        self.table.len() as i64
    }

    /// `φ ∘ ψ` with `self = φ`, when it is again of window-plus-shift form.
    pub fn compose(&self, psi: &AtomicSymbol) -> Result<AtomicSymbol> {
        if self.space != psi.space {
            return Err(Error::SpaceMismatch);
        }
        let shift = self.shift + psi.shift;
        let mut window = psi.window().max(self.window() - psi.shift).max(0);
        if window > MAX_TABLE || psi.shift.abs() > MAX_TABLE {
            return Err(Error::NotClosedForm("composition window too large".into()));
        }
        if let Some((_, Some(count))) = self.space.index_range() {
            window = count;
        }
        let table: Vec<i64> = (0..window).map(|j| self.map(psi.map(j))).collect();
        if matches!(self.space.kind(), SpaceKind::AtomicZ { .. }) {
            let reach = psi.shift.abs() + self.window() + 1;
            if (-reach..0).any(|j| self.map(psi.map(j)) != j + shift) {
                return Err(Error::NotClosedForm("composition is not a window-plus-shift map".into()));
            }
        }
        AtomicSymbol::new(self.space, table, shift)
    }

    /// `φᵏ`.
    pub fn iterate(&self, k: u32) -> Result<AtomicSymbol> {
        let mut out = identity_atomic(self.space)?;
        for _ in 0..k {
            out = self.compose(&out)?;
        }
        Ok(out)
    }

    pub fn compose_seq(&self, f: &AtomSeq) -> Result<AtomSeq> {
        if f.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let n = self.window();
        let mut entries: BTreeMap<i64, f64> = BTreeMap::new();
        for j in 0..n {
            entries.insert(j, f.get(self.table[j as usize]));
        }
        for (&s, &v) in f.entries() {
            let j = s - self.shift;
            if (j < 0 || j >= n) && self.space.contains_index(j) {
                entries.insert(j, v);
            }
        }
        Ok(AtomSeq::assemble(self.space, entries, f.tail_value()))
    }

    pub fn preimage_set(&self, e: &AtomSet) -> AtomSet {
        let n = self.window();
        let mut out = AtomSet::from_indices((0..n).filter(|&j| e.contains(self.table[j as usize])));
        let shifted = AtomSet {
            indices: e.indices.iter().map(|&j| j - self.shift).collect(),
            lower_ray: e.lower_ray.map(|l| l - self.shift),
            upper_ray: e.upper_ray.map(|u| u - self.shift),
        };
        let (lo, hi) = self.space.index_range().expect("atomic space");
        if hi.is_none() {
            out = union_atoms(out, restrict(&shifted, Some(n), None));
        }
        if lo.is_none() {
            out = union_atoms(out, restrict(&shifted, None, Some(0)));
        }
        out.normalized()
    }

    /// `(max, min)` of `|φ^{-n}({k})|` over all atoms, for `n = 1..=horizon`.
    ///
    /// The count function is kept as runs of equal values over the whole
    /// index range. One step pushes the runs outside the window through the
    /// shift and adds the window counts at their table images, so the cost
    /// depends on the window and the number of runs, not on the shift size.
    fn count_profile(&self, horizon: u32) -> Vec<(u64, u64)> {
        const FAR: i128 = 1 << 80;
        let (lo, hi) = self.space.index_range().expect("atomic space");
        let lo = lo.map_or(-FAR, i128::from);
        let hi = hi.map_or(FAR, i128::from);
        let w = self.window() as i128;
        let shift = self.shift as i128;
        let mut runs: Vec<(i128, i128, u64)> = vec![(lo, hi, 1)];
        let mut out = Vec::with_capacity(horizon as usize);
        for _ in 0..horizon {
            let mut delta: BTreeMap<i128, i128> = BTreeMap::new();
            let mut add = |a: i128, b: i128, v: i128| {
                let (a, b) = (a.max(lo), b.min(hi));
                if a < b && v != 0 {
                    *delta.entry(a).or_insert(0) += v;
                    *delta.entry(b).or_insert(0) -= v;
                }
            };
            let mut r = 0;
            for j in 0..w {
                while runs[r].1 <= j {
                    r += 1;
                }
                let target = self.table[j as usize] as i128;
                add(target, target + 1, runs[r].2 as i128);
            }
            for &(a, b, v) in &runs {
                for (x, y) in [(a, b.min(0)), (a.max(w), b)] {
                    if x < y {
                        let x = if x == -FAR { x } else { x + shift };
                        let y = if y == FAR { y } else { y + shift };
                        add(x, y, v as i128);
                    }
                }
            }
            let mut next = Vec::new();
            let mut cur = 0i128;
            let mut at = lo;
            for (&x, &d) in &delta {
                if x > at {
                    push_run(&mut next, at, x, cur as u64);
                }
                at = at.max(x);
                cur += d;
            }
            if at < hi {
                push_run(&mut next, at, hi, cur as u64);
            }
            runs = next;
            let max = runs.iter().map(|r| r.2).max().unwrap_or(0);
            let min = runs.iter().map(|r| r.2).min().unwrap_or(0);
            out.push((max, min));
        }
        out
    }

    fn count_extremes(&self, n: u32) -> (u64, u64) {
        *self.count_profile(n).last().expect("n ≥ 1")
    }
}

fn push_run(runs: &mut Vec<(i128, i128, u64)>, a: i128, b: i128, v: u64) {
    match runs.last_mut() {
        Some(last) if last.2 == v && last.1 == a => last.1 = b,
        _ => runs.push((a, b, v)),
    }
}

fn identity_atomic(space: MeasureSpace) -> Result<AtomicSymbol> {
    let table = match space.index_range() {
        Some((_, Some(count))) => (0..count).collect(),
        _ => Vec::new(),
    };
    AtomicSymbol::new(space, table, 0)
}

fn union_atoms(a: AtomSet, b: AtomSet) -> AtomSet {
    match MeasSet::Atoms(a).union(&MeasSet::Atoms(b)) {
        Ok(MeasSet::Atoms(s)) => s,
        _ => unreachable!("atom sets"),
    }
}

/// The part of `set` inside the index range `[lo, hi)`.
fn restrict(set: &AtomSet, lo: Option<i64>, hi: Option<i64>) -> AtomSet {
    let inside = |j: i64| lo.is_none_or(|l| j >= l) && hi.is_none_or(|h| j < h);
    let mut out = AtomSet::from_indices(set.indices.iter().copied().filter(|&j| inside(j)));
    if let Some(l) = set.lower_ray {
        let top = hi.map_or(l, |h| h.min(l));
        match lo {
            None => out.lower_ray = Some(top),
            Some(start) => out.indices.extend(start..top),
        }
    }
    if let Some(u) = set.upper_ray {
        let start = lo.map_or(u, |l| l.max(u));
        match hi {
            None => out.upper_ray = Some(start),
            Some(end) => out.indices.extend(start..end),
        }
    }
    out
}

/// A self-map from the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSymbol", into = "RawSymbol")]
pub enum Symbol {
    Interval(IntervalSymbol),
    Atomic(AtomicSymbol),
}

impl From<IntervalSymbol> for Symbol {
    fn from(s: IntervalSymbol) -> Self {
        Symbol::Interval(s)
    }
}

impl From<AtomicSymbol> for Symbol {
    fn from(s: AtomicSymbol) -> Self {
        Symbol::Atomic(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSymbol {
    Interval {
        space: MeasureSpace,
        branches: Vec<Branch>,
    },
    Atomic {
        space: MeasureSpace,
        #[serde(default)]
        table: Vec<i64>,
        #[serde(default)]
        shift: i64,
    },
}

impl TryFrom<RawSymbol> for Symbol {
    type Error = Error;

    fn try_from(raw: RawSymbol) -> Result<Self> {
        match raw {
            RawSymbol::Interval { space, branches } => IntervalSymbol::new(space, branches).map(Symbol::Interval),
            RawSymbol::Atomic { space, table, shift } => AtomicSymbol::new(space, table, shift).map(Symbol::Atomic),
        }
    }
}

impl From<Symbol> for RawSymbol {
    fn from(s: Symbol) -> Self {
        match s {
            Symbol::Interval(s) => RawSymbol::Interval { space: s.space, branches: s.branches },
            Symbol::Atomic(s) => RawSymbol::Atomic { space: s.space, table: s.table, shift: s.shift },
        }
    }
}

impl Symbol {
    pub fn space(&self) -> &MeasureSpace {
        match self {
            Symbol::Interval(s) => s.space(),
            Symbol::Atomic(s) => s.space(),
        }
    }

    /// `t ↦ t + beta` on ℝ.
    pub fn translation(beta: f64) -> Result<Symbol> {
        Self::affine_line(1.0, beta)
    }

    pub fn affine_line(slope: f64, offset: f64) -> Result<Symbol> {
        let form = BranchForm::Affine { slope, offset };
        IntervalSymbol::new(MeasureSpace::line(), vec![Branch::new(f64::NEG_INFINITY, f64::INFINITY, form)])
            .map(Symbol::Interval)
    }

    /// `t ↦ slope·t + offset` on `[0, ∞)`, `slope > 0`, `offset ≥ 0`.
    pub fn affine_half_line(slope: f64, offset: f64) -> Result<Symbol> {
        let form = BranchForm::Affine { slope, offset };
        IntervalSymbol::new(MeasureSpace::half_line(), vec![Branch::new(0.0, f64::INFINITY, form)]).map(Symbol::Interval)
    }

    /// `t ↦ 2t mod 1` on `[0, 1)`.
    pub fn doubling_map() -> Symbol {
        let branches = vec![
            Branch::new(0.0, 0.5, BranchForm::Affine { slope: 2.0, offset: 0.0 }),
            Branch::new(0.5, 1.0, BranchForm::Affine { slope: 2.0, offset: -1.0 }),
        ];
        Symbol::Interval(IntervalSymbol::new(MeasureSpace::unit_interval(), branches).expect("valid"))
    }

    /// `t ↦ 1 − t` on `[0, 1)`.
    pub fn reflection_unit() -> Symbol {
        let form = BranchForm::Affine { slope: -1.0, offset: 1.0 };
        Symbol::Interval(IntervalSymbol::new(MeasureSpace::unit_interval(), vec![Branch::new(0.0, 1.0, form)]).expect("valid"))
    }

    /// `t ↦ tⁿ` on `[0, 1)`.
    pub fn power_on_unit(n: u32) -> Result<Symbol> {
        IntervalSymbol::new(MeasureSpace::unit_interval(), vec![Branch::new(0.0, 1.0, BranchForm::PowerOnUnit(n))])
            .map(Symbol::Interval)
    }

    /// `t ↦ exp(1 − 1/t)` on `[0, 1)`.
    pub fn exp_recip() -> Symbol {
        Symbol::Interval(
            IntervalSymbol::new(MeasureSpace::unit_interval(), vec![Branch::new(0.0, 1.0, BranchForm::ExpRecip)])
                .expect("valid"),
        )
    }

    /// `1 + tⁿ` on `[0, 1)` and `n(t − 1) + 2` on `[1, ∞)`.
    pub fn sv_power_map(n: u32) -> Result<Symbol> {
        IntervalSymbol::new(
            MeasureSpace::half_line(),
            vec![Branch::new(0.0, 1.0, BranchForm::ShiftedPower(n)), Branch::new(1.0, f64::INFINITY, BranchForm::AffineTail(n))],
        )
        .map(Symbol::Interval)
    }

    /// `j ↦ j + 1` on ℕ.
    pub fn unilateral_shift() -> Symbol {
        Symbol::Atomic(AtomicSymbol::new(MeasureSpace::naturals(), Vec::new(), 1).expect("valid"))
    }

    /// `j ↦ j + 1` on ℤ.
    pub fn bilateral_shift() -> Symbol {
        Symbol::Atomic(AtomicSymbol::new(MeasureSpace::integers(), Vec::new(), 1).expect("valid"))
    }

    /// `0 ↦ 0`, `j ↦ j − 1` on ℕ.
    pub fn backward_shift_absorbing() -> Symbol {
        Symbol::Atomic(AtomicSymbol::new(MeasureSpace::naturals(), vec![0], -1).expect("valid"))
    }

    /// A permutation of `{0, …, len − 1}` with unit atoms.
    pub fn permutation(perm: Vec<i64>) -> Result<Symbol> {
        let space = MeasureSpace::atomic_finite(1.0, perm.len() as u64)?;
        let sym = AtomicSymbol::new(space, perm, 0)?;
        permutation_cycles(&sym)?;
        Ok(Symbol::Atomic(sym))
    }

    /// Whether the map is measure preserving: `μ(φ⁻¹E) = μ(E)` for all `E`.
    pub fn is_measure_preserving(&self) -> bool {
        match self {
            Symbol::Atomic(s) => {
                let (max, min) = s.count_extremes(1);
                max == 1 && min == 1
            }
            Symbol::Interval(s) => {
                let cells = s.cells();
                s.is_affine()
                    && cells.windows(2).all(|w| {
                        let forms = s.covering(w[0], w[1]);
                        density_sum(&forms, w[0]) == 1.0
                    })
            }
        }
    }
}

/// Cycles of a bijective table, each listed from its smallest element.
pub fn permutation_cycles(sym: &AtomicSymbol) -> Result<Vec<Vec<usize>>> {
    let n = sym.table.len();
    if sym.space.index_range().and_then(|r| r.1) != Some(n as i64) {
        return Err(Error::NotBijective);
    }
    let mut seen_target = vec![false; n];
    for &v in &sym.table {
        let v = v as usize;
        if seen_target[v] {
            return Err(Error::NotBijective);
        }
        seen_target[v] = true;
    }
    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            cycle.push(j);
            j = sym.table[j] as usize;
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// `T_φ f = f ∘ φ`.
pub fn apply(phi: &Symbol, f: &MeasFn) -> Result<MeasFn> {
    match (phi, f) {
        (Symbol::Interval(s), MeasFn::Step(g)) => s.compose(g).map(MeasFn::Step),
        (Symbol::Atomic(s), MeasFn::Atoms(g)) => s.compose_seq(g).map(MeasFn::Atoms),
        _ => Err(Error::SpaceMismatch),
    }
}

/// `φ⁻¹(E)`.
pub fn preimage(phi: &Symbol, e: &MeasSet) -> Result<MeasSet> {
    e.validate(phi.space())?;
    match (phi, e) {
        (Symbol::Interval(s), MeasSet::Intervals(_)) => {
            let chi = indicator(s.space(), e)?;
            Ok(apply(phi, &chi)?.level_set(1.0))
        }
        (Symbol::Atomic(s), MeasSet::Atoms(a)) => Ok(MeasSet::Atoms(s.preimage_set(a))),
        _ => Err(Error::SpaceMismatch),
    }
}

/// `μ(φ⁻¹(E))`.
pub fn preimage_measure(phi: &Symbol, e: &MeasSet) -> Result<f64> {
    measure(phi.space(), &preimage(phi, e)?)
}

/// `T_φ` applied to a closed-form profile on the unit interval.
pub fn apply_profile(phi: &Symbol, p: &AnalyticProfile) -> Result<AnalyticProfile> {
    let Symbol::Interval(s) = phi else {
        return Err(Error::NotClosedForm("profiles live on the unit interval".into()));
    };
    match (s.space().kind(), s.branches()) {
        (SpaceKind::LebesgueInterval { length }, [b]) if length == 1.0 => match b.form {
            BranchForm::PowerOnUnit(n) => p.compose_power(n),
            BranchForm::ExpRecip => p.compose_exp_recip(),
            _ => Err(Error::NotClosedForm("no closed form for this branch".into())),
        },
        _ => Err(Error::NotClosedForm("profiles need a single-branch map of [0, 1)".into())),
    }
}

/// `A = sup μ(φ⁻¹E)/μ(E)`.
///
/// For interval symbols this is the essential supremum of the summed inverse
/// derivatives. Every catalog density is convex on its image (powers with
/// negative exponent, and `1/(y(1 − ln y)²)` is log-convex), so on each cell
/// between image endpoints the supremum is a one-sided limit at an end.
pub fn measure_bound(phi: &Symbol) -> f64 {
    match phi {
        Symbol::Atomic(s) => s.count_extremes(1).0 as f64,
        Symbol::Interval(s) => {
            let cells = s.cells();
            let mut best = 0.0f64;
            for w in cells.windows(2) {
                let forms = s.covering(w[0], w[1]);
                if forms.is_empty() {
                    continue;
                }
                let left = density_sum(&forms, w[0]);
                let right = if w[1].is_finite() { density_sum(&forms, w[1]) } else { left };
                best = best.max(left).max(right);
            }
            best
        }
    }
}

/// `ess inf` of the preimage density, `0` when the images miss a set of
/// positive measure.
fn density_infimum(s: &IntervalSymbol) -> f64 {
    let cells = s.cells();
    let mut best = f64::INFINITY;
    for w in cells.windows(2) {
        let forms = s.covering(w[0], w[1]);
        if forms.is_empty() {
            return 0.0;
        }
        let (c, d) = (w[0], w[1]);
        let value = if forms.iter().all(|f| !matches!(f, BranchForm::ExpRecip)) {
            if d.is_finite() {
                density_sum(&forms, d)
            } else {
                density_sum(&forms, c.max(0.0) + 1.0)
            }
        } else {
            convex_minimum(|y| density_sum(&forms, y), c, d)
        };
        best = best.min(value);
    }
    best
}

fn convex_minimum(h: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    for _ in 0..200 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if h(x1) <= h(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    h(0.5 * (a + b)).min(h(b))
}

/// `C`, the smallest constant with `μ(E) ≤ C μ(φ⁻¹E)`; `inf` when none exists.
pub fn lower_bound(phi: &Symbol) -> f64 {
    let inf = match phi {
        Symbol::Atomic(s) => s.count_extremes(1).1 as f64,
        Symbol::Interval(s) => density_infimum(s),
    };
    1.0 / inf
}

/// `Aₙ` for one iterate, with whether it is exact or only a lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerBoundEntry {
    pub n: u32,
    #[serde(with = "crate::json::ext_real")]
    pub value: f64,
    pub exact: bool,
    /// `ess inf μ(φ^{-n}E)/μ(E)`; exact when `exact` is set, otherwise an
    /// upper estimate from the test family.
    #[serde(with = "crate::json::ext_real")]
    pub infimum: f64,
}

/// Measure bounds of the iterates `φ, φ², …, φ^horizon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerBound {
    pub per_n: Vec<PowerBoundEntry>,
    #[serde(with = "crate::json::ext_real")]
    pub sup: f64,
    pub sup_exact: bool,
}

impl PowerBound {
    pub fn at(&self, n: u32) -> Option<f64> {
        self.per_n.iter().find(|e| e.n == n).map(|e| e.value)
    }
}

const MAX_TRANSFER_BREAKPOINTS: usize = 10_000;
const FAMILY_DEPTH: i32 = 12;

/// Measure bounds `Aₙ` of `φⁿ` for `n ≤ horizon`.
///
/// Atomic symbols and affine interval symbols are handled exactly (preimage
/// counts, respectively the transfer operator acting on step densities).
/// Other interval symbols are exact at `n = 1`; beyond that the value is a
/// lower bound obtained from dyadic test intervals around image endpoints
/// and their forward orbits, and is flagged as such.
pub fn power_measure_bound(phi: &Symbol, horizon: u32) -> Result<PowerBound> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let mut per_n = Vec::with_capacity(horizon as usize);
    match phi {
        Symbol::Atomic(s) => {
            for (n, (max, min)) in (1..=horizon).zip(s.count_profile(horizon)) {
                per_n.push(PowerBoundEntry { n, value: max as f64, exact: true, infimum: min as f64 });
            }
        }
        Symbol::Interval(s) if s.is_affine() => {
            let mut h = StepFn::constant(*s.space(), 1.0)?;
            let mut exact = true;
            for n in 1..=horizon {
                if exact {
                    h = s.transfer(&h)?;
                    if h.breakpoints().len() > MAX_TRANSFER_BREAKPOINTS {
                        exact = false;
                    }
                }
                if exact {
                    let max = h.values().iter().copied().fold(0.0, f64::max);
                    let min = h.values().iter().copied().fold(f64::INFINITY, f64::min);
                    per_n.push(PowerBoundEntry { n, value: max, exact: true, infimum: min });
                } else {
                    per_n.push(family_bound(s, n)?);
                }
            }
        }
        Symbol::Interval(s) => {
            per_n.push(PowerBoundEntry {
                n: 1,
                value: measure_bound(phi),
                exact: true,
                infimum: density_infimum(s),
            });
            for n in 2..=horizon {
                per_n.push(family_bound(s, n)?);
            }
        }
    }
    let sup = per_n.iter().map(|e| e.value).fold(0.0, f64::max);
    let sup_exact = per_n.iter().all(|e| e.exact);
    Ok(PowerBound { per_n, sup, sup_exact })
}

fn family_bound(s: &IntervalSymbol, n: u32) -> Result<PowerBoundEntry> {
    let (lo, hi) = s.space().domain().expect("Lebesgue space");
    let mut points: Vec<f64> = s.cells().into_iter().filter(|p| p.is_finite()).collect();
    let mut frontier = points.clone();
    for _ in 0..n {
        frontier = frontier.iter().map(|&p| s.eval(p.clamp(lo, hi - f64::EPSILON))).filter(|p| p.is_finite()).collect();
        points.extend(frontier.iter().copied());
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let sym = Symbol::Interval(s.clone());
    let mut max = 0.0f64;
    let mut min = f64::INFINITY;
    for &p in &points {
        for j in 0..=FAMILY_DEPTH {
            let w = (-j as f64).exp2();
            for (a, b) in [(p, p + w), (p - w, p)] {
                let (a, b) = (a.max(lo), b.min(hi));
                if !(a < b) {
                    continue;
                }
                let mut set = MeasSet::interval(a, b);
                for _ in 0..n {
                    set = preimage(&sym, &set)?;
                }
                let ratio = measure(s.space(), &set)? / (b - a);
                max = max.max(ratio);
                min = min.min(ratio);
            }
        }
    }
    Ok(PowerBoundEntry { n, value: max, exact: false, infimum: min })
}

/// Whether the symbol satisfies (I3), with the witness constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionI3 {
    pub holds: bool,
    pub witness: f64,
    pub certified: bool,
}

/// All boundedness diagnostics of a symbol over a horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolAnalysis {
    #[serde(with = "crate::json::ext_real")]
    pub measure_bound: f64,
    #[serde(with = "crate::json::ext_real")]
    pub lower_bound: f64,
    pub power_measure_bound: PowerBound,
    pub condition_i1: bool,
    pub condition_i3: ConditionI3,
    pub power_measure_bounded_on_horizon: bool,
    pub condition_i: bool,
    pub nonsingular: bool,
    pub strictly_nonsingular: bool,
    /// `min{1, 1/A}`.
    pub b: f64,
}

/// Checks the condition (I) and collects the other diagnostics.
pub fn check_condition_i(phi: &Symbol, horizon: u32) -> Result<SymbolAnalysis> {
    let pmb = power_measure_bound(phi, horizon)?;
    let a = measure_bound(phi);
    let lower = lower_bound(phi);
    let witness = pmb.per_n.iter().map(|e| e.infimum).fold(1.0, f64::min);
    let certified = pmb.per_n.iter().all(|e| e.exact);
    let i1 = a <= 1.0;
    let i3 = ConditionI3 { holds: witness > 0.0, witness, certified };
    let bounded = pmb.sup.is_finite();
    let strictly = match phi {
        Symbol::Atomic(s) => s.count_extremes(1).1 >= 1,
        Symbol::Interval(s) => {
            let cells = s.cells();
            cells.windows(2).all(|w| !s.covering(w[0], w[1]).is_empty())
        }
    };
    Ok(SymbolAnalysis {
        measure_bound: a,
        lower_bound: lower,
        condition_i1: i1,
        power_measure_bounded_on_horizon: bounded,
        condition_i: bounded && (i1 || i3.holds),
        condition_i3: i3,
        power_measure_bound: pmb,
        nonsingular: true,
        strictly_nonsingular: strictly,
        b: if a <= 1.0 { 1.0 } else { 1.0 / a },
    })
}
