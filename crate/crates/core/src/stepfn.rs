//! Exactly represented measurable functions: step functions on the Lebesgue
//! kinds and finitely supported sequences (with an optional constant tail) on
//! the atomic kinds.

use crate::error::{Error, Result};
use crate::measure_space::{measure, AtomSet, Interval, MeasSet, MeasureSpace, SpaceKind};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One constant piece `[lo, hi)` of a [`StepFn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

impl Piece {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A step function on a Lebesgue space, kept in canonical form.
///
/// `values[i]` is the value on the `i`-th piece; the first piece starts at
/// the left end of the domain and the last one runs to its right end, so
/// `values.len() == breakpoints.len() + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn {
    space: MeasureSpace,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFn {
    /// Validates and canonicalizes. Breakpoints must be strictly increasing
    /// and lie strictly inside the domain; values must be finite.
    pub fn new(space: MeasureSpace, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let (lo, hi) = space
            .domain()
            .ok_or_else(|| Error::InvalidFunction("step functions need a Lebesgue space".into()))?;
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite value {v}")));
        }
        let mut prev = lo;
        for &t in &breakpoints {
            if !(t > prev) || !(t < hi) {
                return Err(Error::InvalidFunction(format!(
                    "breakpoint {t} is not strictly increasing inside ({lo}, {hi})"
                )));
            }
            prev = t;
        }
        Ok(Self::assemble(space, breakpoints, values))
    }

    pub fn constant(space: MeasureSpace, c: f64) -> Result<Self> {
        Self::new(space, Vec::new(), vec![c])
    }

    pub fn zero(space: MeasureSpace) -> Result<Self> {
        Self::constant(space, 0.0)
    }

    /// Builds a step function from pieces given left to right. Breakpoints may
    /// repeat or touch the domain ends; zero-length pieces are dropped and
    /// equal neighbours merged. Callers guarantee nondecreasing breakpoints.
    pub(crate) fn assemble(space: MeasureSpace, breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), breakpoints.len() + 1);
        let (lo, hi) = space.domain().expect("Lebesgue space");
        let mut bps: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(values.len());
        let mut start = lo;
        for (i, &v) in values.iter().enumerate() {
            let end = breakpoints.get(i).copied().unwrap_or(hi).clamp(lo, hi);
            if end <= start {
                continue;
            }
            match vals.last() {
                Some(&last) if last == v => {}
                Some(_) => {
                    bps.push(start);
                    vals.push(v);
                }
                None => vals.push(v),
            }
            start = end.max(start);
        }
        if vals.is_empty() {
            vals.push(*values.last().expect("at least one value"));
        }
        StepFn { space, breakpoints: bps, values: vals }
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value of the leftmost piece.
    pub fn left_tail(&self) -> f64 {
        self.values[0]
    }

    /// Value of the rightmost piece.
    pub fn right_tail(&self) -> f64 {
        *self.values.last().expect("nonempty")
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        let (lo, hi) = self.space.domain().expect("Lebesgue space");
        self.values.iter().enumerate().map(move |(i, &value)| Piece {
            lo: if i == 0 { lo } else { self.breakpoints[i - 1] },
            hi: self.breakpoints.get(i).copied().unwrap_or(hi),
            value,
        })
    }

    /// Right-continuous evaluation at `x` inside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&t| t <= x);
        self.values[idx]
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> StepFn {
        StepFn::assemble(self.space, self.breakpoints.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.len() == 1 && self.values[0] == 0.0
    }

    /// Applies `op` piecewise on the common refinement of `fns`.
    pub fn zip_with(fns: &[&StepFn], op: impl Fn(&[f64]) -> f64) -> Result<StepFn> {
        let first = fns.first().ok_or_else(|| Error::InvalidParameter("no functions given".into()))?;
        if fns.iter().any(|f| f.space != first.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut bps: Vec<f64> = fns.iter().flat_map(|f| f.breakpoints.iter().copied()).collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        let mut cursors = vec![0usize; fns.len()];
        let mut buf = vec![0.0; fns.len()];
        let mut values = Vec::with_capacity(bps.len() + 1);
        for piece in 0..=bps.len() {
            for (k, f) in fns.iter().enumerate() {
                if piece > 0 {
                    let t = bps[piece - 1];
                    while cursors[k] < f.breakpoints.len() && f.breakpoints[cursors[k]] <= t {
                        cursors[k] += 1;
                    }
                }
                buf[k] = f.values[cursors[k]];
            }
            values.push(op(&buf));
        }
        Ok(StepFn::assemble(first.space, bps, values))
    }
}

/// A function on an atomic space: finitely many explicit values plus a
/// constant `tail_value` everywhere else (nonzero only on ℕ).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSeq {
    space: MeasureSpace,
    entries: BTreeMap<i64, f64>,
    tail_value: f64,
}

impl AtomSeq {
    pub fn new(space: MeasureSpace, entries: BTreeMap<i64, f64>, tail_value: f64) -> Result<Self> {
        if !space.is_atomic() {
            return Err(Error::InvalidFunction("sequences need an atomic space".into()));
        }
        if !tail_value.is_finite() {
            return Err(Error::InvalidFunction(format!("non-finite tail value {tail_value}")));
        }
        if tail_value != 0.0 && !matches!(space.kind(), SpaceKind::AtomicN { .. }) {
            return Err(Error::InvalidFunction("a nonzero tail value is only supported on ℕ".into()));
        }
        for (&j, &v) in &entries {
            if !space.contains_index(j) {
                return Err(Error::InvalidFunction(format!("index {j} outside the space")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidFunction(format!("non-finite value {v} at index {j}")));
            }
        }
        Ok(Self::assemble(space, entries, tail_value))
    }

    pub(crate) fn assemble(space: MeasureSpace, mut entries: BTreeMap<i64, f64>, tail_value: f64) -> Self {
        entries.retain(|_, v| *v != tail_value);
        AtomSeq { space, entries, tail_value }
    }

    pub fn from_values(space: MeasureSpace, values: &[f64]) -> Result<Self> {
        Self::new(space, values.iter().enumerate().map(|(j, &v)| (j as i64, v)).collect(), 0.0)
    }

    pub fn zero(space: MeasureSpace) -> Result<Self> {
        Self::new(space, BTreeMap::new(), 0.0)
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn entries(&self) -> &BTreeMap<i64, f64> {
        &self.entries
    }

    pub fn tail_value(&self) -> f64 {
        self.tail_value
    }

    pub fn get(&self, j: i64) -> f64 {
        self.entries.get(&j).copied().unwrap_or(self.tail_value)
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> AtomSeq {
        let entries = self.entries.iter().map(|(&j, &v)| (j, f(v))).collect();
        AtomSeq::assemble(self.space, entries, f(self.tail_value))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty() && self.tail_value == 0.0
    }

    pub fn zip_with(fns: &[&AtomSeq], op: impl Fn(&[f64]) -> f64) -> Result<AtomSeq> {
        let first = fns.first().ok_or_else(|| Error::InvalidParameter("no functions given".into()))?;
        if fns.iter().any(|f| f.space != first.space) {
            return Err(Error::SpaceMismatch);
        }
        let keys: BTreeSet<i64> = fns.iter().flat_map(|f| f.entries.keys().copied()).collect();
        let mut buf = vec![0.0; fns.len()];
        let mut entries = BTreeMap::new();
        for j in keys {
            for (k, f) in fns.iter().enumerate() {
                buf[k] = f.get(j);
            }
            entries.insert(j, op(&buf));
        }
        for (k, f) in fns.iter().enumerate() {
            buf[k] = f.tail_value;
        }
        Ok(AtomSeq::assemble(first.space, entries, op(&buf)))
    }
}

/// The uniform carrier for functions on any supported space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasFn", into = "RawMeasFn")]
pub enum MeasFn {
    Step(StepFn),
    Atoms(AtomSeq),
}

impl From<StepFn> for MeasFn {
    fn from(f: StepFn) -> Self {
        MeasFn::Step(f)
    }
}

impl From<AtomSeq> for MeasFn {
    fn from(f: AtomSeq) -> Self {
        MeasFn::Atoms(f)
    }
}

impl MeasFn {
    pub fn space(&self) -> &MeasureSpace {
        match self {
            MeasFn::Step(f) => f.space(),
            MeasFn::Atoms(f) => f.space(),
        }
    }

    pub fn zero(space: MeasureSpace) -> Result<MeasFn> {
        if space.is_atomic() {
            AtomSeq::zero(space).map(MeasFn::Atoms)
        } else {
            StepFn::zero(space).map(MeasFn::Step)
        }
    }

    pub fn as_step(&self) -> Option<&StepFn> {
        match self {
            MeasFn::Step(f) => Some(f),
            MeasFn::Atoms(_) => None,
        }
    }

    pub fn as_atoms(&self) -> Option<&AtomSeq> {
        match self {
            MeasFn::Atoms(f) => Some(f),
            MeasFn::Step(_) => None,
        }
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> MeasFn {
        match self {
            MeasFn::Step(s) => MeasFn::Step(s.map_values(f)),
            MeasFn::Atoms(a) => MeasFn::Atoms(a.map_values(f)),
        }
    }

    pub fn abs(&self) -> MeasFn {
        self.map_values(f64::abs)
    }

    pub fn scale(&self, c: f64) -> MeasFn {
        self.map_values(|v| c * v)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MeasFn::Step(f) => f.is_zero(),
            MeasFn::Atoms(f) => f.is_zero(),
        }
    }

    /// Applies `op` pointwise across functions on one space.
    pub fn zip_with(fns: &[&MeasFn], op: impl Fn(&[f64]) -> f64) -> Result<MeasFn> {
        match fns.first() {
            None => Err(Error::InvalidParameter("no functions given".into())),
            Some(MeasFn::Step(_)) => {
                let steps = fns.iter().map(|f| f.as_step().ok_or(Error::SpaceMismatch)).collect::<Result<Vec<_>>>()?;
                StepFn::zip_with(&steps, op).map(MeasFn::Step)
            }
            Some(MeasFn::Atoms(_)) => {
                let seqs = fns.iter().map(|f| f.as_atoms().ok_or(Error::SpaceMismatch)).collect::<Result<Vec<_>>>()?;
                AtomSeq::zip_with(&seqs, op).map(MeasFn::Atoms)
            }
        }
    }

    /// Nonzero levels `(|v|, measure of {f = v})`, one entry per piece or atom.
    pub fn abs_levels(&self) -> Vec<(f64, f64)> {
        match self {
            MeasFn::Step(f) => {
                f.pieces().filter(|p| p.value != 0.0).map(|p| (p.value.abs(), p.length())).collect()
            }
            MeasFn::Atoms(f) => {
                let m = f.space.atom_mass().expect("atomic space");
                let mut out: Vec<(f64, f64)> =
                    f.entries.values().filter(|v| **v != 0.0).map(|v| (v.abs(), m)).collect();
                if f.tail_value != 0.0 {
                    out.push((f.tail_value.abs(), f64::INFINITY));
                }
                out
            }
        }
    }

    /// The set `{f = value}`.
    pub fn level_set(&self, value: f64) -> MeasSet {
        match self {
            MeasFn::Step(f) => MeasSet::Intervals(crate::measure_space::merge_intervals(
                f.pieces().filter(|p| p.value == value).map(|p| Interval::new(p.lo, p.hi)).collect(),
            )),
            MeasFn::Atoms(f) => {
                let mut set = AtomSet::from_indices(f.entries.iter().filter(|(_, v)| **v == value).map(|(j, _)| *j));
                if f.tail_value == value {
                    let top = f.entries.keys().next_back().map_or(0, |j| j + 1);
                    set.indices.extend((0..top).filter(|j| !f.entries.contains_key(j)));
                    set.upper_ray = Some(top);
                }
                MeasSet::Atoms(set.normalized())
            }
        }
    }

    /// Pointwise evaluation at a real point (Lebesgue) or an index (atomic,
    /// `x` must be integral).
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            MeasFn::Step(f) => {
                let (lo, hi) = f.space.domain().expect("Lebesgue space");
                if !(x >= lo && x < hi) {
                    return Err(Error::OutOfRange(format!("{x} outside [{lo}, {hi})")));
                }
                Ok(f.eval(x))
            }
            MeasFn::Atoms(f) => {
                if x.fract() != 0.0 || !f.space.contains_index(x as i64) {
                    return Err(Error::OutOfRange(format!("{x} is not an index of the space")));
                }
                Ok(f.get(x as i64))
            }
        }
    }
}

/// `χ_E` as a canonical function.
pub fn indicator(space: &MeasureSpace, set: &MeasSet) -> Result<MeasFn> {
    set.validate(space)?;
    match set {
        MeasSet::Intervals(ivs) => {
            let ivs = crate::measure_space::merge_intervals(ivs.clone());
            let mut bps = Vec::new();
            let mut vals = vec![0.0];
            for iv in &ivs {
                bps.push(iv.lo);
                vals.push(1.0);
                bps.push(iv.hi);
                vals.push(0.0);
            }
            Ok(MeasFn::Step(StepFn::assemble(*space, bps, vals)))
        }
        MeasSet::Atoms(a) => {
            if a.lower_ray.is_some() {
                return Err(Error::InvalidSet("a lower ray has no sequence representation".into()));
            }
            let mut entries: BTreeMap<i64, f64> = a.indices.iter().map(|&j| (j, 1.0)).collect();
            let tail = match a.upper_ray {
                Some(u) => {
                    if !matches!(space.kind(), SpaceKind::AtomicN { .. }) {
                        return Err(Error::InvalidSet("an upper ray is only representable on ℕ".into()));
                    }
                    for j in 0..u {
                        entries.entry(j).or_insert(0.0);
                    }
                    1.0
                }
                None => 0.0,
            };
            Ok(MeasFn::Atoms(AtomSeq::assemble(*space, entries, tail)))
        }
    }
}

/// `Σ cᵢ fᵢ` in canonical form.
pub fn linear_combine(coeffs: &[f64], fns: &[&MeasFn]) -> Result<MeasFn> {
    if coeffs.len() != fns.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for {} functions",
            coeffs.len(),
            fns.len()
        )));
    }
    if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite coefficient {c}")));
    }
    MeasFn::zip_with(fns, |vals| vals.iter().zip(coeffs).fold(0.0, |acc, (v, c)| acc + c * v))
}

/// `f + g`.
pub fn add(f: &MeasFn, g: &MeasFn) -> Result<MeasFn> {
    MeasFn::zip_with(&[f, g], |v| v[0] + v[1])
}

/// `f - g`.
pub fn sub(f: &MeasFn, g: &MeasFn) -> Result<MeasFn> {
    MeasFn::zip_with(&[f, g], |v| v[0] - v[1])
}

/// Pointwise maximum.
pub fn max(f: &MeasFn, g: &MeasFn) -> Result<MeasFn> {
    MeasFn::zip_with(&[f, g], |v| v[0].max(v[1]))
}

/// Exact `∫ f dμ`; `±inf` when a nonzero value sits on an infinite-measure
/// set, an error when both signs diverge.
pub fn integrate(f: &MeasFn) -> Result<f64> {
    let mut finite = 0.0;
    let (mut pos_inf, mut neg_inf) = (false, false);
    let mut add_term = |v: f64, m: f64| {
        if v == 0.0 {
            return;
        }
        if m.is_infinite() {
            if v > 0.0 {
                pos_inf = true;
            } else {
                neg_inf = true;
            }
        } else {
            finite += v * m;
        }
    };
    match f {
        MeasFn::Step(s) => s.pieces().for_each(|p| add_term(p.value, p.length())),
        MeasFn::Atoms(a) => {
            let m = a.space.atom_mass().expect("atomic space");
            a.entries.values().for_each(|&v| add_term(v, m));
            add_term(a.tail_value, f64::INFINITY);
        }
    }
    match (pos_inf, neg_inf) {
        (true, true) => Err(Error::UndefinedIntegral),
        (true, false) => Ok(f64::INFINITY),
        (false, true) => Ok(f64::NEG_INFINITY),
        (false, false) => Ok(finite),
    }
}

/// Whether `f ≤ g` everywhere.
pub fn pointwise_leq(f: &MeasFn, g: &MeasFn) -> Result<bool> {
    let diff = MeasFn::zip_with(&[f, g], |v| if v[0] <= v[1] { 0.0 } else { 1.0 })?;
    Ok(diff.is_zero())
}

/// Exact measure of `{f = value}`.
pub fn level_measure(f: &MeasFn, value: f64) -> Result<f64> {
    measure(f.space(), &f.level_set(value))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasFn {
    space: MeasureSpace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    breakpoints: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left_tail: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    right_tail: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<(i64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail_value: Option<f64>,
}

impl TryFrom<RawMeasFn> for MeasFn {
    type Error = Error;

    fn try_from(raw: RawMeasFn) -> Result<Self> {
        if raw.space.is_atomic() {
            if raw.breakpoints.is_some() || raw.values.is_some() || raw.left_tail.is_some() || raw.right_tail.is_some() {
                return Err(Error::InvalidFunction("step-function fields on an atomic space".into()));
            }
            let pairs = raw.entries.unwrap_or_default();
            let mut entries = BTreeMap::new();
            for (j, v) in pairs {
                if entries.insert(j, v).is_some() {
                    return Err(Error::InvalidFunction(format!("index {j} listed twice")));
                }
            }
            return AtomSeq::new(raw.space, entries, raw.tail_value.unwrap_or(0.0)).map(MeasFn::Atoms);
        }
        if raw.entries.is_some() || raw.tail_value.is_some() {
            return Err(Error::InvalidFunction("sequence fields on a Lebesgue space".into()));
        }
        let bps = raw.breakpoints.unwrap_or_default();
        let interior = raw.values.unwrap_or_default();
        let values = if bps.is_empty() {
            if !interior.is_empty() {
                return Err(Error::InvalidFunction("interior values given without breakpoints".into()));
            }
            let v = match (raw.left_tail, raw.right_tail) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::InvalidFunction("a constant function needs equal tails".into()))
                }
                (a, b) => a.or(b).unwrap_or(0.0),
            };
            vec![v]
        } else {
            if interior.len() + 1 != bps.len() {
                return Err(Error::InvalidFunction(format!(
                    "{} breakpoints need {} interior values, got {}",
                    bps.len(),
                    bps.len() - 1,
                    interior.len()
                )));
            }
            let mut v = Vec::with_capacity(bps.len() + 1);
            v.push(raw.left_tail.unwrap_or(0.0));
            v.extend(interior);
            v.push(raw.right_tail.unwrap_or(0.0));
            v
        };
        StepFn::new(raw.space, bps, values).map(MeasFn::Step)
    }
}

impl From<MeasFn> for RawMeasFn {
    fn from(f: MeasFn) -> Self {
        match f {
            MeasFn::Step(s) => {
                let k = s.values.len();
                RawMeasFn {
                    space: s.space,
                    values: Some(if k > 1 { s.values[1..k - 1].to_vec() } else { Vec::new() }),
                    left_tail: Some(s.values[0]),
                    right_tail: Some(s.values[k - 1]),
                    breakpoints: Some(s.breakpoints),
                    entries: None,
                    tail_value: None,
                }
            }
            MeasFn::Atoms(a) => RawMeasFn {
                space: a.space,
                breakpoints: None,
                values: None,
                left_tail: None,
                right_tail: None,
                entries: Some(a.entries.into_iter().collect()),
                tail_value: Some(a.tail_value),
            },
        }
    }
}
