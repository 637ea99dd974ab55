//! Resonant σ-finite measure spaces and the finite unions of intervals /
//! index sets that every computation in the crate stays inside.

use crate::error::{Error, Result};
use crate::json::ExtReal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// The kinds of measure space the toolkit supports.
///
/// Each one is resonant: Lebesgue measure on an interval, half-line or line,
/// or a completely atomic space whose atoms all carry the same mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    LebesgueHalfLine,
    LebesgueLine,
    LebesgueInterval { length: f64 },
    AtomicN { atom_mass: f64 },
    AtomicZ { atom_mass: f64 },
    AtomicFinite { atom_mass: f64, count: u64 },
}

/// A validated measure space. Construct through the named constructors or
/// [`MeasureSpace::from_kind`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct MeasureSpace {
    kind: SpaceKind,
}

impl MeasureSpace {
    pub fn half_line() -> Self {
        MeasureSpace { kind: SpaceKind::LebesgueHalfLine }
    }

    pub fn line() -> Self {
        MeasureSpace { kind: SpaceKind::LebesgueLine }
    }

    pub fn interval(length: f64) -> Result<Self> {
        Self::from_kind(SpaceKind::LebesgueInterval { length })
    }

    /// `[0, 1)` with Lebesgue measure.
    pub fn unit_interval() -> Self {
        MeasureSpace { kind: SpaceKind::LebesgueInterval { length: 1.0 } }
    }

    pub fn atomic_n(atom_mass: f64) -> Result<Self> {
        Self::from_kind(SpaceKind::AtomicN { atom_mass })
    }

    pub fn atomic_z(atom_mass: f64) -> Result<Self> {
        Self::from_kind(SpaceKind::AtomicZ { atom_mass })
    }

    pub fn atomic_finite(atom_mass: f64, count: u64) -> Result<Self> {
        Self::from_kind(SpaceKind::AtomicFinite { atom_mass, count })
    }

    /// ℕ with counting measure.
    pub fn naturals() -> Self {
        MeasureSpace { kind: SpaceKind::AtomicN { atom_mass: 1.0 } }
    }

    /// ℤ with counting measure.
    pub fn integers() -> Self {
        MeasureSpace { kind: SpaceKind::AtomicZ { atom_mass: 1.0 } }
    }

    pub fn from_kind(kind: SpaceKind) -> Result<Self> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpace(format!("{what} must be a positive finite real, got {v}")))
            }
        };
        match kind {
            SpaceKind::LebesgueHalfLine | SpaceKind::LebesgueLine => {}
            SpaceKind::LebesgueInterval { length } => positive(length, "length")?,
            SpaceKind::AtomicN { atom_mass } | SpaceKind::AtomicZ { atom_mass } => {
                positive(atom_mass, "atom_mass")?
            }
            SpaceKind::AtomicFinite { atom_mass, count } => {
                positive(atom_mass, "atom_mass")?;
                if count == 0 {
                    return Err(Error::InvalidSpace("count must be at least 1".into()));
                }
                if count > i64::MAX as u64 {
                    return Err(Error::InvalidSpace("count too large".into()));
                }
            }
        }
        Ok(MeasureSpace { kind })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::AtomicN { .. } | SpaceKind::AtomicZ { .. } | SpaceKind::AtomicFinite { .. }
        )
    }

    pub fn is_lebesgue(&self) -> bool {
        !self.is_atomic()
    }

    /// `(lo, hi)` of the domain `[lo, hi)` for Lebesgue kinds.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self.kind {
            SpaceKind::LebesgueHalfLine => Some((0.0, f64::INFINITY)),
            SpaceKind::LebesgueLine => Some((f64::NEG_INFINITY, f64::INFINITY)),
            SpaceKind::LebesgueInterval { length } => Some((0.0, length)),
            _ => None,
        }
    }

    /// Index range `[lo, hi)` for atomic kinds; `None` marks an unbounded side.
    pub fn index_range(&self) -> Option<(Option<i64>, Option<i64>)> {
        match self.kind {
            SpaceKind::AtomicN { .. } => Some((Some(0), None)),
            SpaceKind::AtomicZ { .. } => Some((None, None)),
            SpaceKind::AtomicFinite { count, .. } => Some((Some(0), Some(count as i64))),
            _ => None,
        }
    }

    pub fn atom_mass(&self) -> Option<f64> {
        match self.kind {
            SpaceKind::AtomicN { atom_mass }
            | SpaceKind::AtomicZ { atom_mass }
            | SpaceKind::AtomicFinite { atom_mass, .. } => Some(atom_mass),
            _ => None,
        }
    }

    pub fn contains_index(&self, j: i64) -> bool {
        match self.index_range() {
            Some((lo, hi)) => lo.is_none_or(|lo| j >= lo) && hi.is_none_or(|hi| j < hi),
            None => false,
        }
    }

    pub fn total_measure(&self) -> f64 {
        match self.kind {
            SpaceKind::LebesgueInterval { length } => length,
            SpaceKind::AtomicFinite { atom_mass, count } => atom_mass * count as f64,
            _ => f64::INFINITY,
        }
    }

    /// Whether `t` is attained as the measure of some set.
    pub fn measure_in_range(&self, t: f64) -> bool {
        if t.is_nan() || t < 0.0 {
            return false;
        }
        let total = self.total_measure();
        if t > total {
            return false;
        }
        match self.atom_mass() {
            Some(m) if t.is_finite() => (t / m).fract() == 0.0,
            _ => true,
        }
    }
}

/// Half-open interval `[lo, hi)`; `lo` may be `-inf`, `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(ExtReal, ExtReal)", into = "(ExtReal, ExtReal)")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }
}

impl From<(ExtReal, ExtReal)> for Interval {
    fn from((lo, hi): (ExtReal, ExtReal)) -> Self {
        Interval { lo: lo.0, hi: hi.0 }
    }
}

impl From<Interval> for (ExtReal, ExtReal) {
    fn from(i: Interval) -> Self {
        (ExtReal(i.lo), ExtReal(i.hi))
    }
}

/// A finite set of atoms, optionally extended by a ray of all indices below
/// `lower_ray` and/or all indices at or above `upper_ray`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSet {
    #[serde(default)]
    pub indices: BTreeSet<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_ray: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_ray: Option<i64>,
}

impl AtomSet {
    pub fn from_indices<I: IntoIterator<Item = i64>>(it: I) -> Self {
        AtomSet { indices: it.into_iter().collect(), lower_ray: None, upper_ray: None }
    }

    pub fn contains(&self, j: i64) -> bool {
        self.indices.contains(&j)
            || self.lower_ray.is_some_and(|l| j < l)
            || self.upper_ray.is_some_and(|u| j >= u)
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty() && self.lower_ray.is_none() && self.upper_ray.is_none()
    }

    /// Absorbs explicit indices into the rays and extends rays over adjacent
    /// explicit indices.
    pub fn normalized(mut self) -> Self {
        if let Some(mut u) = self.upper_ray {
            self.indices.retain(|&j| j < u);
            while self.indices.remove(&(u - 1)) {
                u -= 1;
            }
            self.upper_ray = Some(u);
        }
        if let Some(mut l) = self.lower_ray {
            self.indices.retain(|&j| j >= l);
            while self.indices.remove(&l) {
                l += 1;
            }
            self.lower_ray = Some(l);
        }
        self
    }
}

/// A measurable set in the finite representation used throughout the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasSet {
    Intervals(Vec<Interval>),
    Atoms(AtomSet),
}

impl MeasSet {
    pub fn empty_for(space: &MeasureSpace) -> Self {
        if space.is_atomic() {
            MeasSet::Atoms(AtomSet::default())
        } else {
            MeasSet::Intervals(Vec::new())
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        MeasSet::Intervals(vec![Interval::new(lo, hi)])
    }

    pub fn atoms<I: IntoIterator<Item = i64>>(it: I) -> Self {
        MeasSet::Atoms(AtomSet::from_indices(it))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MeasSet::Intervals(v) => v.is_empty(),
            MeasSet::Atoms(a) => a.is_empty(),
        }
    }

    /// Checks that the set is well formed for `space`.
    pub fn validate(&self, space: &MeasureSpace) -> Result<()> {
        match (self, space.domain(), space.index_range()) {
            (MeasSet::Intervals(ivs), Some((lo, hi)), _) => {
                let mut prev_hi = f64::NEG_INFINITY;
                for iv in ivs {
                    if iv.lo.is_nan() || iv.hi.is_nan() || !(iv.lo < iv.hi) {
                        return Err(Error::InvalidSet(format!("empty or NaN interval [{}, {})", iv.lo, iv.hi)));
                    }
                    if iv.lo < lo || iv.hi > hi {
                        return Err(Error::InvalidSet(format!(
                            "interval [{}, {}) leaves the domain [{lo}, {hi})",
                            iv.lo, iv.hi
                        )));
                    }
                    if iv.lo < prev_hi {
                        return Err(Error::InvalidSet("intervals overlap or are unsorted".into()));
                    }
                    prev_hi = iv.hi;
                }
                Ok(())
            }
            (MeasSet::Atoms(a), None, Some((lo, hi))) => {
                for &j in &a.indices {
                    if !space.contains_index(j) {
                        return Err(Error::InvalidSet(format!("index {j} outside the space")));
                    }
                }
                if a.lower_ray.is_some() && lo.is_some() {
                    return Err(Error::InvalidSet("lower ray on a space bounded below".into()));
                }
                if a.upper_ray.is_some() && hi.is_some() {
                    return Err(Error::InvalidSet("upper ray on a finite space".into()));
                }
                if let Some(u) = a.upper_ray {
                    if lo.is_some_and(|lo| u < lo) {
                        return Err(Error::InvalidSet(format!("upper ray start {u} outside the space")));
                    }
                    if a.indices.range(u..).next().is_some() {
                        return Err(Error::InvalidSet("explicit index inside the upper ray".into()));
                    }
                }
                if let Some(l) = a.lower_ray {
                    if a.indices.range(..l).next().is_some() {
                        return Err(Error::InvalidSet("explicit index inside the lower ray".into()));
                    }
                    if a.upper_ray.is_some_and(|u| u < l) {
                        return Err(Error::InvalidSet("rays overlap".into()));
                    }
                }
                Ok(())
            }
            _ => Err(Error::InvalidSet("set kind does not match the space".into())),
        }
    }

    /// Disjoint union of two sets over the same space.
    pub fn union(&self, other: &MeasSet) -> Result<MeasSet> {
        match (self, other) {
            (MeasSet::Intervals(a), MeasSet::Intervals(b)) => {
                Ok(MeasSet::Intervals(merge_intervals(a.iter().chain(b.iter()).copied().collect())))
            }
            (MeasSet::Atoms(a), MeasSet::Atoms(b)) => {
                let mut out = a.clone();
                out.indices.extend(b.indices.iter().copied());
                out.lower_ray = match (a.lower_ray, b.lower_ray) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                };
                out.upper_ray = match (a.upper_ray, b.upper_ray) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                Ok(MeasSet::Atoms(out.normalized()))
            }
            _ => Err(Error::SpaceMismatch),
        }
    }
}

/// Sorts intervals and merges the ones that overlap or touch. Empty intervals
/// are dropped.
pub(crate) fn merge_intervals(mut ivs: Vec<Interval>) -> Vec<Interval> {
    ivs.retain(|iv| iv.lo < iv.hi);
    ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

/// Exact Lebesgue or counting measure of `set`; `+inf` for rays.
pub fn measure(space: &MeasureSpace, set: &MeasSet) -> Result<f64> {
    set.validate(space)?;
    Ok(match set {
        MeasSet::Intervals(ivs) => ivs.iter().map(Interval::length).sum(),
        MeasSet::Atoms(a) => {
            if a.lower_ray.is_some() || a.upper_ray.is_some() {
                f64::INFINITY
            } else {
                space.atom_mass().unwrap_or(1.0) * a.indices.len() as f64
            }
        }
    })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSpace {
    LebesgueHalfLine,
    LebesgueLine,
    LebesgueInterval {
        length: f64,
    },
    AtomicN {
        #[serde(default = "unit_mass")]
        atom_mass: f64,
    },
    AtomicZ {
        #[serde(default = "unit_mass")]
        atom_mass: f64,
    },
    AtomicFinite {
        #[serde(default = "unit_mass")]
        atom_mass: f64,
        count: u64,
    },
}

fn unit_mass() -> f64 {
    1.0
}

impl TryFrom<RawSpace> for MeasureSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        MeasureSpace::from_kind(match raw {
            RawSpace::LebesgueHalfLine => SpaceKind::LebesgueHalfLine,
            RawSpace::LebesgueLine => SpaceKind::LebesgueLine,
            RawSpace::LebesgueInterval { length } => SpaceKind::LebesgueInterval { length },
            RawSpace::AtomicN { atom_mass } => SpaceKind::AtomicN { atom_mass },
            RawSpace::AtomicZ { atom_mass } => SpaceKind::AtomicZ { atom_mass },
            RawSpace::AtomicFinite { atom_mass, count } => SpaceKind::AtomicFinite { atom_mass, count },
        })
    }
}

impl From<MeasureSpace> for RawSpace {
    fn from(s: MeasureSpace) -> Self {
        match s.kind {
            SpaceKind::LebesgueHalfLine => RawSpace::LebesgueHalfLine,
            SpaceKind::LebesgueLine => RawSpace::LebesgueLine,
            SpaceKind::LebesgueInterval { length } => RawSpace::LebesgueInterval { length },
            SpaceKind::AtomicN { atom_mass } => RawSpace::AtomicN { atom_mass },
            SpaceKind::AtomicZ { atom_mass } => RawSpace::AtomicZ { atom_mass },
            SpaceKind::AtomicFinite { atom_mass, count } => RawSpace::AtomicFinite { atom_mass, count },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_examples() {
        let hl = MeasureSpace::half_line();
        assert_eq!(measure(&hl, &MeasSet::interval(2.0, 5.0)).unwrap(), 3.0);
        assert_eq!(measure(&MeasureSpace::naturals(), &MeasSet::atoms([0, 1, 2])).unwrap(), 3.0);
        let left_ray = MeasSet::interval(f64::NEG_INFINITY, 0.0);
        assert_eq!(measure(&MeasureSpace::line(), &left_ray).unwrap(), f64::INFINITY);
    }

    #[test]
    fn atom_mass_scales_counting_measure() {
        let s = MeasureSpace::atomic_finite(0.5, 10).unwrap();
        assert_eq!(measure(&s, &MeasSet::atoms([1, 3, 9])).unwrap(), 1.5);
        let tail = MeasSet::Atoms(AtomSet { upper_ray: Some(4), ..Default::default() });
        assert_eq!(measure(&MeasureSpace::naturals(), &tail).unwrap(), f64::INFINITY);
    }

    #[test]
    fn malformed_sets_are_rejected() {
        let hl = MeasureSpace::half_line();
        let overlapping = MeasSet::Intervals(vec![Interval::new(0.0, 2.0), Interval::new(1.0, 3.0)]);
        assert!(matches!(measure(&hl, &overlapping), Err(Error::InvalidSet(_))));
        assert!(measure(&hl, &MeasSet::interval(-1.0, 1.0)).is_err());
        assert!(measure(&hl, &MeasSet::interval(f64::NEG_INFINITY, 1.0)).is_err());
        let fin = MeasureSpace::atomic_finite(1.0, 3).unwrap();
        assert!(measure(&fin, &MeasSet::atoms([0, 3])).is_err());
        assert!(measure(&MeasureSpace::naturals(), &MeasSet::atoms([-1])).is_err());
        assert!(measure(&hl, &MeasSet::atoms([1])).is_err());
    }

    #[test]
    fn invalid_spaces() {
        assert!(MeasureSpace::interval(0.0).is_err());
        assert!(MeasureSpace::atomic_n(-1.0).is_err());
        assert!(MeasureSpace::atomic_finite(1.0, 0).is_err());
        assert!(MeasureSpace::interval(f64::INFINITY).is_err());
    }

    #[test]
    fn normalization_extends_rays() {
        let a = AtomSet { indices: [1, 3, 4, 7].into(), lower_ray: None, upper_ray: Some(5) };
        let n = a.normalized();
        assert_eq!(n.upper_ray, Some(3));
        assert_eq!(n.indices, [1].into());
    }

    #[test]
    fn space_json_roundtrip() {
        let s: MeasureSpace = serde_json::from_str(r#"{"kind":"atomic_finite","count":4}"#).unwrap();
        assert_eq!(s, MeasureSpace::atomic_finite(1.0, 4).unwrap());
        assert!(serde_json::from_str::<MeasureSpace>(r#"{"kind":"lebesgue_interval","length":-2}"#).is_err());
        let set: MeasSet = serde_json::from_str(r#"{"intervals":[["-inf",0],[1,"inf"]]}"#).unwrap();
        assert_eq!(measure(&MeasureSpace::line(), &set).unwrap(), f64::INFINITY);
    }
}
