//! Distribution functions, non-increasing rearrangements and the comparisons
//! built on them.

use crate::error::{Error, Result};
use crate::measure_space::MeasureSpace;
use crate::stepfn::{integrate, MeasFn, Piece, StepFn};
use serde::{Deserialize, Serialize};

/// A nonnegative, nonincreasing step function on `[0, ∞)`. Its right tail is
/// the limit at infinity and may be positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasFn", into = "MeasFn")]
pub struct Rearranged(StepFn);

impl Rearranged {
    /// Wraps a half-line step function that is already nonincreasing and
    /// nonnegative.
    pub fn from_step(f: StepFn) -> Result<Self> {
        if *f.space() != MeasureSpace::half_line() {
            return Err(Error::InvalidFunction("a rearrangement lives on the half-line".into()));
        }
        if f.values().iter().any(|&v| v < 0.0) || f.values().windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidFunction("values must be nonnegative and nonincreasing".into()));
        }
        Ok(Rearranged(f))
    }

    /// `Σ vᵢ χ_[tᵢ₋₁, tᵢ)` followed by `tail` from pieces given as
    /// `(width, value)` in nonincreasing value order.
    pub fn from_widths(widths: &[(f64, f64)], tail: f64) -> Result<Self> {
        let mut bps = Vec::with_capacity(widths.len());
        let mut vals = Vec::with_capacity(widths.len() + 1);
        let mut t = 0.0;
        for &(w, v) in widths {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidFunction(format!("piece width {w} must be positive and finite")));
            }
            vals.push(v);
            t += w;
            bps.push(t);
        }
        vals.push(tail);
        Self::from_step(StepFn::new(MeasureSpace::half_line(), bps, vals)?)
    }

    pub fn zero() -> Self {
        Rearranged(StepFn::zero(MeasureSpace::half_line()).expect("valid"))
    }

    pub fn as_step(&self) -> &StepFn {
        &self.0
    }

    pub fn into_step(self) -> StepFn {
        self.0
    }

    pub fn to_measfn(&self) -> MeasFn {
        MeasFn::Step(self.0.clone())
    }

    pub fn breakpoints(&self) -> &[f64] {
        self.0.breakpoints()
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        self.0.pieces()
    }

    /// `lim_{t→∞} f*(t)`.
    pub fn tail(&self) -> f64 {
        self.0.right_tail()
    }

    /// `f*(0) = ‖f‖_∞`.
    pub fn sup(&self) -> f64 {
        self.0.left_tail()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `f*(t)` (right-continuous).
    pub fn at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.sup();
        }
        self.0.eval(t)
    }

    /// Left limit `f*(t−)`; equals `f*(0)` at `t = 0`.
    pub fn left_limit(&self, t: f64) -> f64 {
        let idx = self.0.breakpoints().partition_point(|&b| b < t);
        self.0.values()[idx]
    }

    /// `∫₀ᵗ f*`, piecewise linear in `t`; `t = inf` gives the full integral.
    pub fn integral_to(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for p in self.pieces() {
            if t <= p.lo {
                break;
            }
            if p.value == 0.0 {
                continue;
            }
            let hi = p.hi.min(t);
            acc += p.value * (hi - p.lo);
        }
        acc
    }

    /// `f**(t) = (1/t) ∫₀ᵗ f*`.
    pub fn maximal_average(&self, t: f64) -> f64 {
        self.integral_to(t) / t
    }

    /// `∫₀ᵗ f*` at every breakpoint, in order.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pieces()
            .take(self.breakpoints().len())
            .map(|p| {
                acc += p.value * p.length();
                acc
            })
            .collect()
    }

    /// Measure of `{f* > s}`.
    pub fn distribution_at(&self, s: f64) -> f64 {
        if self.tail() > s {
            return f64::INFINITY;
        }
        let idx = self.values().partition_point(|&v| v > s);
        if idx == 0 {
            0.0
        } else {
            self.breakpoints()[idx - 1]
        }
    }

    /// `D_t f*`, again a rearrangement.
    pub fn dilate(&self, t: f64) -> Result<Rearranged> {
        Ok(Rearranged(dilate(&self.0, t)?))
    }

    pub fn scale(&self, c: f64) -> Result<Rearranged> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("scale {c} must be finite and nonnegative")));
        }
        Ok(Rearranged(self.0.map_values(|v| c * v)))
    }
}

impl TryFrom<MeasFn> for Rearranged {
    type Error = Error;

    fn try_from(f: MeasFn) -> Result<Self> {
        match f {
            MeasFn::Step(s) => Rearranged::from_step(s),
            MeasFn::Atoms(_) => Err(Error::InvalidFunction("a rearrangement lives on the half-line".into())),
        }
    }
}

impl From<Rearranged> for MeasFn {
    fn from(r: Rearranged) -> Self {
        MeasFn::Step(r.0)
    }
}

/// `μ({|f| > s})`.
pub fn distribution_at(f: &MeasFn, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("level {s} must be nonnegative")));
    }
    Ok(f.abs_levels().iter().filter(|(v, _)| *v > s).map(|(_, m)| *m).sum())
}

/// The non-increasing rearrangement `f*`.
pub fn rearrangement(f: &MeasFn) -> Rearranged {
    let mut levels = f.abs_levels();
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut bps = Vec::new();
    let mut vals = Vec::new();
    let mut t = 0.0;
    let mut tail = 0.0;
    let mut i = 0;
    while i < levels.len() {
        let v = levels[i].0;
        let mut m = 0.0;
        while i < levels.len() && levels[i].0 == v {
            m += levels[i].1;
            i += 1;
        }
        if m.is_infinite() {
            tail = v;
            break;
        }
        vals.push(v);
        t += m;
        bps.push(t);
    }
    vals.push(tail);
    Rearranged(StepFn::assemble(MeasureSpace::half_line(), bps, vals))
}

/// `∫₀ᵗ f*`.
pub fn hardy_integral(f: &MeasFn, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    Ok(rearrangement(f).integral_to(t))
}

/// Exact Hardy–Littlewood–Pólya comparison `f** ≤ g**` of two rearrangements.
///
/// Both primitives are piecewise linear, so comparing them at the union of
/// breakpoints and comparing the terminal slopes decides the relation.
pub fn hlp_leq_rearranged(f: &Rearranged, g: &Rearranged) -> bool {
    hlp_compare(f, g, 0.0)
}

/// As [`hlp_leq_rearranged`], allowing `F(t) ≤ G(t) + rel·|G(t)|`.
pub fn hlp_leq_rearranged_tol(f: &Rearranged, g: &Rearranged, rel: f64) -> bool {
    hlp_compare(f, g, rel)
}

fn hlp_compare(f: &Rearranged, g: &Rearranged, rel: f64) -> bool {
    if f.tail() > g.tail() {
        return false;
    }
    let mut ts: Vec<f64> = f.breakpoints().iter().chain(g.breakpoints()).copied().collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let (mut fi, mut gi) = (Primitive::new(f), Primitive::new(g));
    ts.into_iter().all(|t| {
        let (a, b) = (fi.at(t), gi.at(t));
        a <= b + rel * b.abs()
    })
}

/// Incremental evaluation of `∫₀ᵗ f*` at nondecreasing `t`.
struct Primitive<'a> {
    f: &'a Rearranged,
    idx: usize,
    start: f64,
    acc: f64,
}

impl<'a> Primitive<'a> {
    fn new(f: &'a Rearranged) -> Self {
        Primitive { f, idx: 0, start: 0.0, acc: 0.0 }
    }

    fn at(&mut self, t: f64) -> f64 {
        let bps = self.f.breakpoints();
        let vals = self.f.values();
        while self.idx < bps.len() && bps[self.idx] <= t {
            self.acc += vals[self.idx] * (bps[self.idx] - self.start);
            self.start = bps[self.idx];
            self.idx += 1;
        }
        let v = vals[self.idx];
        if v == 0.0 {
            self.acc
        } else {
            self.acc + v * (t - self.start)
        }
    }
}

/// `f ≺ g`.
pub fn hlp_leq(f: &MeasFn, g: &MeasFn) -> bool {
    hlp_leq_rearranged(&rearrangement(f), &rearrangement(g))
}

/// `f* = g*`, for functions on possibly different spaces.
pub fn equimeasurable(f: &MeasFn, g: &MeasFn) -> bool {
    rearrangement(f) == rearrangement(g)
}

/// `(∫|fg| dμ, ∫₀^∞ f*g* dλ)`.
pub fn hardy_littlewood_pair(f: &MeasFn, g: &MeasFn) -> Result<(f64, f64)> {
    let prod = MeasFn::zip_with(&[f, g], |v| (v[0] * v[1]).abs())?;
    let lhs = integrate(&prod)?;
    let rhs = integrate_product(&rearrangement(f), &rearrangement(g))?;
    Ok((lhs, rhs))
}

/// `∫₀^∞ f g dλ` for two rearrangements.
pub fn integrate_product(f: &Rearranged, g: &Rearranged) -> Result<f64> {
    let prod = StepFn::zip_with(&[f.as_step(), g.as_step()], |v| v[0] * v[1])?;
    integrate(&MeasFn::Step(prod))
}

/// `D_t f(s) = f(ts)` for a function on the half-line.
pub fn dilate(f: &StepFn, t: f64) -> Result<StepFn> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("dilation parameter {t} must be positive and finite")));
    }
    if *f.space() != MeasureSpace::half_line() {
        return Err(Error::InvalidFunction("dilation acts on the half-line".into()));
    }
    let bps = f.breakpoints().iter().map(|&b| b / t).collect();
    Ok(StepFn::assemble(*f.space(), bps, f.values().to_vec()))
}

/// Whether `f*(t) → 0` as `t → ∞`.
pub fn is_acr(f: &MeasFn) -> bool {
    rearrangement(f).tail() == 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure_space::MeasSet;
    use crate::stepfn::{indicator, linear_combine, AtomSeq};

    fn chi(lo: f64, hi: f64) -> MeasFn {
        indicator(&MeasureSpace::half_line(), &MeasSet::interval(lo, hi)).unwrap()
    }

    fn two_one() -> MeasFn {
        linear_combine(&[2.0, 1.0], &[&chi(0.0, 1.0), &chi(1.0, 3.0)]).unwrap()
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(distribution_at(&two_one(), 1.5).unwrap(), 1.0);
        let line = MeasureSpace::line();
        let ray = indicator(&line, &MeasSet::interval(0.0, f64::INFINITY)).unwrap();
        assert_eq!(distribution_at(&ray, 0.5).unwrap(), f64::INFINITY);
        let zero = MeasFn::zero(line).unwrap();
        assert_eq!(distribution_at(&zero, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(rearrangement(&chi(2.0, 5.0)).to_measfn(), chi(0.0, 3.0));
        let r = rearrangement(&two_one());
        assert_eq!(r.breakpoints(), &[1.0, 3.0]);
        assert_eq!(r.values(), &[2.0, 1.0, 0.0]);
        let signed = StepFn::new(MeasureSpace::line(), vec![0.0, 1.0], vec![0.0, -3.0, 1.0]).unwrap();
        let r = rearrangement(&signed.into());
        assert_eq!((r.breakpoints(), r.values()), (&[1.0][..], &[3.0, 1.0][..]));
    }

    #[test]
    fn hardy_integral_examples() {
        assert_eq!(hardy_integral(&two_one(), 2.0).unwrap(), 3.0);
        assert_eq!(hardy_integral(&chi(0.0, 3.0), 6.0).unwrap(), 3.0);
        assert_eq!(hardy_integral(&chi(0.0, f64::INFINITY), 10.0).unwrap(), 10.0);
        assert!(hardy_integral(&chi(0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn hlp_examples() {
        let two = chi(0.0, 1.0).scale(2.0);
        assert!(hlp_leq(&chi(0.0, 2.0), &two));
        assert!(!hlp_leq(&two, &chi(0.0, 2.0)));
        let tail = chi(0.0, f64::INFINITY);
        assert!(!hlp_leq(&tail, &chi(0.0, 100.0)));
        assert!(hlp_leq(&chi(0.0, 100.0), &tail));
    }

    #[test]
    fn equimeasurable_examples() {
        let line = indicator(&MeasureSpace::line(), &MeasSet::interval(0.0, 3.0)).unwrap();
        assert!(equimeasurable(&chi(2.0, 5.0), &line));
        assert!(!equimeasurable(&chi(0.0, 3.0), &chi(0.0, 2.0)));
        let seq = indicator(&MeasureSpace::naturals(), &MeasSet::atoms([4, 7])).unwrap();
        // oracle: two unit atoms rearrange to two unit-width pieces of height one
        let expected = Rearranged::from_widths(&[(1.0, 1.0), (1.0, 1.0)], 0.0).unwrap();
        assert_eq!(rearrangement(&seq), expected);
        assert!(equimeasurable(&seq, &chi(0.0, 2.0)));
    }

    #[test]
    fn hardy_littlewood_examples() {
        assert_eq!(hardy_littlewood_pair(&chi(0.0, 1.0), &chi(2.0, 3.0)).unwrap(), (0.0, 1.0));
        assert_eq!(hardy_littlewood_pair(&chi(0.0, 2.0), &chi(0.0, 2.0)).unwrap(), (2.0, 2.0));
        let f = linear_combine(&[2.0, 1.0], &[&chi(0.0, 1.0), &chi(1.0, 2.0)]).unwrap();
        let g = chi(1.0, 3.0);
        // oracle: fg = 1 on [1,2); f*g* = 2 on [0,1) plus 1 on [1,2)
        let lhs_oracle = 1.0 * 1.0;
        let rhs_oracle = 2.0 * 1.0 + 1.0 * 1.0;
        assert_eq!(hardy_littlewood_pair(&f, &g).unwrap(), (lhs_oracle, rhs_oracle));
    }

    #[test]
    fn dilation_examples() {
        let f = chi(0.0, 4.0);
        let s = f.as_step().unwrap();
        assert_eq!(MeasFn::Step(dilate(s, 2.0).unwrap()), chi(0.0, 2.0));
        assert_eq!(MeasFn::Step(dilate(s, 0.5).unwrap()), chi(0.0, 8.0));
        assert_eq!(&dilate(s, 1.0).unwrap(), s);
        assert!(dilate(s, 0.0).is_err());
    }

    #[test]
    fn acr_examples() {
        assert!(is_acr(&chi(0.0, 3.0)));
        assert!(!is_acr(&chi(0.0, f64::INFINITY)));
        let fin = MeasureSpace::atomic_finite(1.0, 5).unwrap();
        let seq = AtomSeq::from_values(fin, &[3.0, 1.0, 4.0, 1.0, 5.0]).unwrap();
        assert!(is_acr(&seq.into()));
    }

    #[test]
    fn atomic_tail_rearranges_to_tail() {
        let n = MeasureSpace::naturals();
        let f = AtomSeq::new(n, [(0, 5.0), (2, 0.5)].into(), 2.0).unwrap();
        let r = rearrangement(&f.into());
        assert_eq!(r.values(), &[5.0, 2.0]);
        assert_eq!(r.tail(), 2.0);
    }
}
