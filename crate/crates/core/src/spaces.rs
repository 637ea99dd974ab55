//! Rearrangement-invariant (quasi)norms, fundamental functions and
//! ξ-seminorms, all evaluated on the non-increasing rearrangement.
//!
//! Lorentz norms use the convention
//! `‖f‖_{p,q} = (∫₀^∞ (t^{1/p} f*(t))^q dt/t)^{1/q}`.

use crate::error::{Error, Result};
use crate::measure_space::MeasureSpace;
use crate::rearrange::{integrate_product, rearrangement, Rearranged};
use crate::stepfn::{MeasFn, StepFn};
use serde::{Deserialize, Serialize};

/// Quasiconcave weights Φ used by the Marcinkiewicz spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", try_from = "RawPhi", into = "RawPhi")]
pub enum QuasiconcaveFn {
    /// `t ↦ t^α`, `0 < α ≤ 1`.
    Power(f64),
    /// `0` at `0`, `1/(1 − ln t)` on `(0, 1)`, `1` on `[1, ∞)`.
    LogClip,
    /// Piecewise linear through the origin and the listed points, constant
    /// after the last one.
    StepApprox(Vec<(f64, f64)>),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawPhi {
    Power(f64),
    LogClip,
    StepApprox(Vec<(f64, f64)>),
}

impl TryFrom<RawPhi> for QuasiconcaveFn {
    type Error = Error;

    fn try_from(raw: RawPhi) -> Result<Self> {
        match raw {
            RawPhi::Power(a) => QuasiconcaveFn::power(a),
            RawPhi::LogClip => Ok(QuasiconcaveFn::LogClip),
            RawPhi::StepApprox(points) => QuasiconcaveFn::step_approx(points),
        }
    }
}

impl From<QuasiconcaveFn> for RawPhi {
    fn from(phi: QuasiconcaveFn) -> Self {
        match phi {
            QuasiconcaveFn::Power(a) => RawPhi::Power(a),
            QuasiconcaveFn::LogClip => RawPhi::LogClip,
            QuasiconcaveFn::StepApprox(p) => RawPhi::StepApprox(p),
        }
    }
}

/// Outcome of [`quasiconcave_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiconcaveCertificate {
    pub quasiconcave: bool,
    pub reason: String,
}

impl QuasiconcaveFn {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("power exponent {alpha} must lie in (0, 1]")));
        }
        Ok(QuasiconcaveFn::Power(alpha))
    }

    /// Validates the interpolation data: abscissae positive and strictly
    /// increasing, values finite and nonnegative.
    pub fn step_approx(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("step approximation needs at least one point".into()));
        }
        let mut prev = 0.0;
        for &(t, v) in &points {
            if !(t > prev) || !t.is_finite() || !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("bad interpolation point ({t}, {v})")));
            }
            prev = t;
        }
        Ok(QuasiconcaveFn::StepApprox(points))
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            QuasiconcaveFn::Power(a) => {
                if *a == 1.0 {
                    t
                } else if *a == 0.5 {
                    t.sqrt()
                } else {
                    t.powf(*a)
                }
            }
            QuasiconcaveFn::LogClip => {
                if t >= 1.0 {
                    1.0
                } else {
                    1.0 / (1.0 - t.ln())
                }
            }
            QuasiconcaveFn::StepApprox(points) => {
                let idx = points.partition_point(|&(x, _)| x < t);
                if idx == points.len() {
                    return points[idx - 1].1;
                }
                let (x1, y1) = points[idx];
                if x1 == t {
                    return y1;
                }
                let (x0, y0) = if idx == 0 { (0.0, 0.0) } else { points[idx - 1] };
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
        }
    }

    /// `lim_{t→∞} Φ(t)`.
    pub fn at_infinity(&self) -> f64 {
        match self {
            QuasiconcaveFn::Power(_) => f64::INFINITY,
            QuasiconcaveFn::LogClip => 1.0,
            QuasiconcaveFn::StepApprox(points) => points.last().expect("nonempty").1,
        }
    }

    /// Points where Φ changes its analytic form.
    fn knots(&self) -> Vec<f64> {
        match self {
            QuasiconcaveFn::Power(_) => Vec::new(),
            QuasiconcaveFn::LogClip => vec![1.0],
            QuasiconcaveFn::StepApprox(points) => points.iter().map(|p| p.0).collect(),
        }
    }

    fn is_nondecreasing(&self) -> bool {
        match self {
            QuasiconcaveFn::StepApprox(points) => points.windows(2).all(|w| w[1].1 >= w[0].1),
            _ => true,
        }
    }
}

/// Decides quasiconcavity: `Φ(0) = 0`, `Φ` nondecreasing, `Φ(t)/t`
/// nonincreasing.
pub fn quasiconcave_check(phi: &QuasiconcaveFn) -> QuasiconcaveCertificate {
    match phi {
        QuasiconcaveFn::Power(a) => QuasiconcaveCertificate {
            quasiconcave: true,
            reason: format!("t^{a} is nondecreasing and t^{a}/t = t^({a}-1) is nonincreasing since {a} <= 1"),
        },
        QuasiconcaveFn::LogClip => QuasiconcaveCertificate {
            quasiconcave: true,
            reason: "1/(1-ln t) increases on (0,1) and equals 1 from t = 1 on; Φ(t)/t = 1/(t(1-ln t)) \
                     decreases on (0,1) because t(1-ln t) has derivative -ln t > 0 there, and Φ(t)/t = 1/t \
                     decreases on [1,inf)"
                .into(),
        },
        QuasiconcaveFn::StepApprox(points) => {
            if let Some(w) = points.windows(2).find(|w| w[1].1 < w[0].1) {
                return QuasiconcaveCertificate {
                    quasiconcave: false,
                    reason: format!("decreases between t = {} and t = {}", w[0].0, w[1].0),
                };
            }
            let ratios: Vec<(f64, f64)> = points.iter().map(|&(t, v)| (t, v / t)).collect();
            if let Some(w) = ratios.windows(2).find(|w| w[1].1 > w[0].1) {
                return QuasiconcaveCertificate {
                    quasiconcave: false,
                    reason: format!("Φ(t)/t increases between t = {} and t = {}", w[0].0, w[1].0),
                };
            }
            QuasiconcaveCertificate {
                quasiconcave: true,
                reason: "piecewise linear: monotonicity of Φ and of Φ(t)/t holds on the knots, \
                         hence on every segment"
                    .into(),
            }
        }
    }
}

/// The family of r.i. (quasi)norms.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// `p ∈ (0, ∞]`.
    Lp { p: f64 },
    Lorentz { p: f64, q: f64 },
    WeakLp { p: f64 },
    /// `sup Φ(t) f*(t)`.
    MarcWeak { phi: QuasiconcaveFn },
    /// `sup Φ(t) f**(t)`.
    MarcStrong { phi: QuasiconcaveFn },
}

/// A validated norm together with the space it is taken over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNormSpec", into = "RawNormSpec")]
pub struct NormSpec {
    kind: NormKind,
    space: MeasureSpace,
}

impl NormSpec {
    pub fn new(kind: NormKind, space: MeasureSpace) -> Result<Self> {
        let open = |p: f64, what: &str| {
            if p > 0.0 && p.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} = {p} must lie in (0, inf)")))
            }
        };
        match &kind {
            NormKind::Lp { p } => {
                if !(*p > 0.0) {
                    return Err(Error::InvalidParameter(format!("p = {p} must lie in (0, inf]")));
                }
            }
            NormKind::Lorentz { p, q } => {
                open(*p, "p")?;
                open(*q, "q")?;
                let e = q / p;
                if !(e > 0.0 && e.is_finite() && (p / q).is_finite()) {
                    return Err(Error::InvalidParameter(format!("q/p = {e} is out of floating-point range")));
                }
            }
            NormKind::WeakLp { p } => open(*p, "p")?,
            NormKind::MarcWeak { phi } => {
                if !phi.is_nondecreasing() {
                    return Err(Error::InvalidParameter("Φ must be nondecreasing".into()));
                }
            }
            NormKind::MarcStrong { phi } => {
                let cert = quasiconcave_check(phi);
                if !cert.quasiconcave {
                    return Err(Error::InvalidParameter(format!("Φ is not quasiconcave: {}", cert.reason)));
                }
            }
        }
        Ok(NormSpec { kind, space })
    }

    pub fn lp(p: f64, space: MeasureSpace) -> Result<Self> {
        Self::new(NormKind::Lp { p }, space)
    }

    pub fn lorentz(p: f64, q: f64, space: MeasureSpace) -> Result<Self> {
        Self::new(NormKind::Lorentz { p, q }, space)
    }

    pub fn weak_lp(p: f64, space: MeasureSpace) -> Result<Self> {
        Self::new(NormKind::WeakLp { p }, space)
    }

    pub fn marc_weak(phi: QuasiconcaveFn, space: MeasureSpace) -> Result<Self> {
        Self::new(NormKind::MarcWeak { phi }, space)
    }

    pub fn marc_strong(phi: QuasiconcaveFn, space: MeasureSpace) -> Result<Self> {
        Self::new(NormKind::MarcStrong { phi }, space)
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    /// The same norm over another space.
    pub fn with_space(&self, space: MeasureSpace) -> NormSpec {
        NormSpec { kind: self.kind.clone(), space }
    }

    /// Short column label, e.g. `L2` or `Lorentz(2,1)`.
    pub fn label(&self) -> String {
        match &self.kind {
            NormKind::Lp { p } if p.is_infinite() => "Linf".into(),
            NormKind::Lp { p } => format!("L{p}"),
            NormKind::Lorentz { p, q } => format!("Lorentz({p},{q})"),
            NormKind::WeakLp { p } => format!("WeakL{p}"),
            NormKind::MarcWeak { phi } => format!("m[{}]", phi_label(phi)),
            NormKind::MarcStrong { phi } => format!("M[{}]", phi_label(phi)),
        }
    }

    /// The norm of a function given by its rearrangement.
    pub fn eval_rearranged(&self, r: &Rearranged) -> f64 {
        if r.is_zero() {
            return 0.0;
        }
        match &self.kind {
            NormKind::Lp { p } => lp_norm(r, *p),
            NormKind::Lorentz { p, q } => lorentz_norm(r, *p, *q),
            NormKind::WeakLp { p } => {
                if r.tail() > 0.0 {
                    return f64::INFINITY;
                }
                r.pieces()
                    .filter(|pc| pc.value > 0.0)
                    .map(|pc| pc.value * pc.hi.powf(1.0 / p))
                    .fold(0.0, f64::max)
            }
            NormKind::MarcWeak { phi } => marc_weak_norm(r, phi),
            NormKind::MarcStrong { phi } => marc_strong_norm(r, phi),
        }
    }
}

fn phi_label(phi: &QuasiconcaveFn) -> String {
    match phi {
        QuasiconcaveFn::Power(a) => format!("t^{a}"),
        QuasiconcaveFn::LogClip => "logclip".into(),
        QuasiconcaveFn::StepApprox(p) => format!("step{}", p.len()),
    }
}

fn lp_norm(r: &Rearranged, p: f64) -> f64 {
    if p.is_infinite() {
        return r.sup();
    }
    if r.tail() > 0.0 {
        return f64::INFINITY;
    }
    let pieces = r.pieces().filter(|pc| pc.value > 0.0);
    if p == 1.0 {
        pieces.map(|pc| pc.value * pc.length()).sum()
    } else if p == 2.0 {
        pieces.map(|pc| pc.value * pc.value * pc.length()).sum::<f64>().sqrt()
    } else {
        pieces.map(|pc| pc.value.powf(p) * pc.length()).sum::<f64>().powf(1.0 / p)
    }
}

fn lorentz_norm(r: &Rearranged, p: f64, q: f64) -> f64 {
    if p == q {
        return lp_norm(r, p);
    }
    if r.tail() > 0.0 {
        return f64::INFINITY;
    }
    let sum: f64 = r
        .pieces()
        .filter(|pc| pc.value > 0.0)
        .map(|pc| pc.value.powf(q) * lorentz_weight(pc.lo, pc.hi, p, q))
        .sum();
    if q == 1.0 {
        sum
    } else {
        sum.powf(1.0 / q)
    }
}

/// `∫_lo^hi t^{q/p - 1} dt`, written so that tiny `q/p` stays finite.
fn lorentz_weight(lo: f64, hi: f64, p: f64, q: f64) -> f64 {
    let e = q / p;
    if lo == 0.0 {
        return (p / q) * hi.powf(e);
    }
    let x = e * (hi / lo).ln();
    let rel = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
    lo.powf(e) * (hi / lo).ln() * rel
}

fn marc_weak_norm(r: &Rearranged, phi: &QuasiconcaveFn) -> f64 {
    let mut best = 0.0f64;
    let last = r.breakpoints().len();
    for (i, pc) in r.pieces().enumerate() {
        if pc.value == 0.0 {
            continue;
        }
        let phi_b = if i == last { phi.at_infinity() } else { phi.eval(pc.hi) };
        best = best.max(pc.value * phi_b);
    }
    best
}

/// `sup_t Φ(t) F(t)/t` with `F(t) = ∫₀ᵗ f*`.
///
/// On a piece where `f* = v` the quantity reads `Φ(t)(v + c/t)` with
/// `c ≥ 0`. For `Φ = t^α` it is quasiconvex in `t`, for the log weight it is
/// quasiconvex in `ln t`, and for linear segments of a step approximation it
/// is convex, so the supremum is attained at breakpoints of `f*`, knots of
/// `Φ`, or in the limit `t → ∞`.
fn marc_strong_norm(r: &Rearranged, phi: &QuasiconcaveFn) -> f64 {
    let tail = r.tail();
    if tail > 0.0 && phi.at_infinity().is_infinite() {
        return f64::INFINITY;
    }
    let mut ts: Vec<f64> = r.breakpoints().to_vec();
    ts.extend(phi.knots());
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut best = ts.iter().map(|&t| phi.eval(t) * r.integral_to(t) / t).fold(0.0, f64::max);
    if tail > 0.0 {
        best = best.max(phi.at_infinity() * tail);
    }
    best
}

/// `‖f‖` for `f` over the norm's space.
pub fn norm_eval(spec: &NormSpec, f: &MeasFn) -> Result<f64> {
    if f.space() != spec.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(spec.eval_rearranged(&rearrangement(f)))
}

/// `φ_X(t)`, the norm of an indicator of measure `t`.
pub fn fundamental_function(spec: &NormSpec, t: f64) -> Result<f64> {
    if !spec.space().measure_in_range(t) {
        return Err(Error::OutOfRange(format!("no set of measure {t} in the space")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let chi = if t.is_infinite() {
        Rearranged::from_widths(&[], 1.0)?
    } else {
        Rearranged::from_widths(&[(t, 1.0)], 0.0)?
    };
    Ok(spec.eval_rearranged(&chi))
}

/// A weight `φ*` defining the seminorm `|f|_φ = ∫₀^∞ φ* f*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Rearranged", into = "Rearranged")]
pub struct XiWeight(Rearranged);

impl XiWeight {
    pub fn new(weight: Rearranged) -> Result<Self> {
        if weight.is_zero() {
            return Err(Error::InvalidParameter("a ξ-weight must not vanish identically".into()));
        }
        Ok(XiWeight(weight))
    }

    /// The constant weight `1`.
    pub fn unit() -> Self {
        XiWeight(Rearranged::from_widths(&[], 1.0).expect("valid"))
    }

    pub fn weight(&self) -> &Rearranged {
        &self.0
    }

    pub fn label(&self) -> String {
        if self.0.breakpoints().is_empty() {
            format!("xi[{}]", self.0.tail())
        } else {
            format!("xi[{} pieces]", self.0.values().len())
        }
    }
}

impl TryFrom<Rearranged> for XiWeight {
    type Error = Error;

    fn try_from(r: Rearranged) -> Result<Self> {
        XiWeight::new(r)
    }
}

impl From<XiWeight> for Rearranged {
    fn from(w: XiWeight) -> Self {
        w.0
    }
}

/// `|f|_w = ∫₀^∞ w f*`.
pub fn xi_seminorm(w: &XiWeight, f: &MeasFn) -> Result<f64> {
    xi_of_rearranged(w, &rearrangement(f))
}

pub fn xi_of_rearranged(w: &XiWeight, r: &Rearranged) -> Result<f64> {
    integrate_product(&w.0, r)
}

/// Closed-form decreasing functions on `(0, 1)` that are not step functions,
/// optionally truncated at a height `cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileShape {
    /// `a − b ln t`.
    Log { a: f64, b: f64 },
    /// `a + b/t`.
    Hyperbolic { a: f64, b: f64 },
}

/// `min(shape(t), cap)` on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticProfile {
    shape: ProfileShape,
    cap: Option<f64>,
}

impl AnalyticProfile {
    pub fn new(shape: ProfileShape, cap: Option<f64>) -> Result<Self> {
        let (a, b) = match shape {
            ProfileShape::Log { a, b } | ProfileShape::Hyperbolic { a, b } => (a, b),
        };
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("profile coefficients ({a}, {b}) must be finite and >= 0")));
        }
        if let Some(c) = cap {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidParameter(format!("cap {c} must be positive and finite")));
            }
        }
        Ok(AnalyticProfile { shape, cap })
    }

    /// `1/Φ = 1 − ln t` for the log weight.
    pub fn reciprocal_log_clip() -> Self {
        AnalyticProfile { shape: ProfileShape::Log { a: 1.0, b: 1.0 }, cap: None }
    }

    pub fn capped(self, cap: f64) -> Result<Self> {
        let cap = self.cap.map_or(cap, |c| c.min(cap));
        Self::new(self.shape, Some(cap))
    }

    pub fn shape(&self) -> ProfileShape {
        self.shape
    }

    pub fn cap(&self) -> Option<f64> {
        self.cap
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = match self.shape {
            ProfileShape::Log { a, b } => a - b * t.ln(),
            ProfileShape::Hyperbolic { a, b } => a + b / t,
        };
        self.cap.map_or(v, |c| v.min(c))
    }

    /// `p ∘ (t ↦ tⁿ)`.
    pub fn compose_power(&self, n: u32) -> Result<Self> {
        match self.shape {
            ProfileShape::Log { a, b } => Self::new(ProfileShape::Log { a, b: b * n as f64 }, self.cap),
            ProfileShape::Hyperbolic { .. } => {
                Err(Error::NotClosedForm("a hyperbolic profile composed with a power".into()))
            }
        }
    }

    /// `p ∘ (t ↦ exp(1 − 1/t))`.
    pub fn compose_exp_recip(&self) -> Result<Self> {
        match self.shape {
            ProfileShape::Log { a, b } if a >= b => {
                Self::new(ProfileShape::Hyperbolic { a: a - b, b }, self.cap)
            }
            _ => Err(Error::NotClosedForm("composition leaves the profile catalog".into())),
        }
    }

    /// `sup_{0<t<1} Φ(t) p(t)` for the log weight `Φ`.
    ///
    /// With `x = −ln t` every case reduces to a function that is monotone or
    /// quasiconvex in `x`, so the supremum is a limit at `t → 0`, `t → 1`, or
    /// the value at the point where the cap starts to bind.
    pub fn marc_weak_norm(&self, phi: &QuasiconcaveFn) -> Result<f64> {
        if *phi != QuasiconcaveFn::LogClip {
            return Err(Error::NotClosedForm("profiles are evaluated against the log weight only".into()));
        }
        let log_weight = |t: f64| 1.0 / (1.0 - t.ln());
        Ok(match (self.shape, self.cap) {
            (ProfileShape::Log { a, b }, None) => a.max(b),
            (ProfileShape::Log { a, b }, Some(l)) => {
                if l <= a {
                    l
                } else if b == 0.0 {
                    a
                } else {
                    a.max(l / (1.0 + (l - a) / b))
                }
            }
            (ProfileShape::Hyperbolic { a, b }, None) => {
                if b > 0.0 {
                    f64::INFINITY
                } else {
                    a
                }
            }
            (ProfileShape::Hyperbolic { a, b }, Some(l)) => {
                if l <= a + b {
                    l
                } else {
                    let t_l = b / (l - a);
                    (a + b).max(l * log_weight(t_l))
                }
            }
        })
    }

    /// A step function below the profile: on a geometric grid of `points`
    /// cells between `t_min` and `1`, each cell carries the value at its right
    /// end. The point where the cap starts to bind is added to the grid.
    pub fn lower_step(&self, t_min: f64, points: usize) -> Result<StepFn> {
        if !(t_min > 0.0 && t_min < 1.0) || points == 0 {
            return Err(Error::InvalidParameter("need 0 < t_min < 1 and at least one cell".into()));
        }
        let ratio = (1.0 / t_min).powf(1.0 / points as f64);
        let mut grid: Vec<f64> = (0..points).map(|i| t_min * ratio.powi(i as i32)).collect();
        if let Some(t) = self.cap_point() {
            if t > 0.0 && t < 1.0 {
                grid.push(t);
            }
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut values: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        values.push(self.eval(1.0));
        StepFn::new(MeasureSpace::unit_interval(), grid, values)
    }

    /// Where the uncapped shape crosses the cap.
    pub fn cap_point(&self) -> Option<f64> {
        let l = self.cap?;
        match self.shape {
            ProfileShape::Log { a, b } if b > 0.0 => Some((-(l - a) / b).exp()),
            ProfileShape::Hyperbolic { a, b } if l > a => Some(b / (l - a)),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawNormSpec {
    Lp {
        #[serde(with = "crate::json::ext_real")]
        p: f64,
        space: MeasureSpace,
    },
    Lorentz {
        p: f64,
        q: f64,
        space: MeasureSpace,
    },
    WeakLp {
        p: f64,
        space: MeasureSpace,
    },
    MarcWeak {
        phi: QuasiconcaveFn,
        space: MeasureSpace,
    },
    MarcStrong {
        phi: QuasiconcaveFn,
        space: MeasureSpace,
    },
}

impl TryFrom<RawNormSpec> for NormSpec {
    type Error = Error;

    fn try_from(raw: RawNormSpec) -> Result<Self> {
        let (kind, space) = match raw {
            RawNormSpec::Lp { p, space } => (NormKind::Lp { p }, space),
            RawNormSpec::Lorentz { p, q, space } => (NormKind::Lorentz { p, q }, space),
            RawNormSpec::WeakLp { p, space } => (NormKind::WeakLp { p }, space),
            RawNormSpec::MarcWeak { phi, space } => (NormKind::MarcWeak { phi }, space),
            RawNormSpec::MarcStrong { phi, space } => (NormKind::MarcStrong { phi }, space),
        };
        NormSpec::new(kind, space)
    }
}

impl From<NormSpec> for RawNormSpec {
    fn from(s: NormSpec) -> Self {
        let space = s.space;
        match s.kind {
            NormKind::Lp { p } => RawNormSpec::Lp { p, space },
            NormKind::Lorentz { p, q } => RawNormSpec::Lorentz { p, q, space },
            NormKind::WeakLp { p } => RawNormSpec::WeakLp { p, space },
            NormKind::MarcWeak { phi } => RawNormSpec::MarcWeak { phi, space },
            NormKind::MarcStrong { phi } => RawNormSpec::MarcStrong { phi, space },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure_space::MeasSet;
    use crate::stepfn::{indicator, linear_combine};

    fn hl() -> MeasureSpace {
        MeasureSpace::half_line()
    }

    fn chi(lo: f64, hi: f64) -> MeasFn {
        indicator(&hl(), &MeasSet::interval(lo, hi)).unwrap()
    }

    #[test]
    fn lp_examples() {
        let f = linear_combine(&[2.0, 1.0], &[&chi(0.0, 1.0), &chi(1.0, 3.0)]).unwrap();
        assert_eq!(norm_eval(&NormSpec::lp(1.0, hl()).unwrap(), &f).unwrap(), 4.0);
        assert_eq!(norm_eval(&NormSpec::lp(f64::INFINITY, hl()).unwrap(), &f).unwrap(), 2.0);
        assert_eq!(norm_eval(&NormSpec::lp(2.0, hl()).unwrap(), &chi(0.0, f64::INFINITY)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn lorentz_example() {
        // oracle: ∫₀⁴ t^{1/2} dt/t = 2·4^{1/2}
        let oracle = 2.0 * 4f64.sqrt();
        let spec = NormSpec::lorentz(2.0, 1.0, hl()).unwrap();
        assert_eq!(norm_eval(&spec, &chi(0.0, 4.0)).unwrap(), oracle);
        assert_eq!(fundamental_function(&spec, 4.0).unwrap(), 4.0);
        assert_eq!(fundamental_function(&spec, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn weak_lp_uses_right_endpoints() {
        let f = linear_combine(&[3.0, 1.0], &[&chi(0.0, 1.0), &chi(1.0, 9.0)]).unwrap();
        let spec = NormSpec::weak_lp(2.0, hl()).unwrap();
        assert_eq!(norm_eval(&spec, &f).unwrap(), 3.0);
    }

    #[test]
    fn marc_weak_fundamental_function_is_phi() {
        for phi in [QuasiconcaveFn::LogClip, QuasiconcaveFn::power(0.5).unwrap()] {
            let spec = NormSpec::marc_weak(phi.clone(), hl()).unwrap();
            for t in [0.125, 0.5, 1.0, 3.0] {
                assert_eq!(fundamental_function(&spec, t).unwrap(), phi.eval(t));
            }
        }
    }

    #[test]
    fn marc_strong_matches_brute_force() {
        let f = linear_combine(&[4.0, 1.0, 0.5], &[&chi(0.0, 0.25), &chi(0.25, 2.0), &chi(2.0, 6.0)]).unwrap();
        let r = rearrangement(&f);
        for phi in [QuasiconcaveFn::LogClip, QuasiconcaveFn::power(0.75).unwrap()] {
            let spec = NormSpec::marc_strong(phi.clone(), hl()).unwrap();
            let exact = norm_eval(&spec, &f).unwrap();
            let mut brute = 0.0f64;
            for i in 1..200_000 {
                let t = i as f64 * 5e-5;
                brute = brute.max(phi.eval(t) * r.integral_to(t) / t);
            }
            assert!(brute <= exact * (1.0 + 1e-12));
            assert!(exact - brute < 1e-3 * exact);
        }
    }

    #[test]
    fn quasiconcavity() {
        assert!(quasiconcave_check(&QuasiconcaveFn::LogClip).quasiconcave);
        assert!(quasiconcave_check(&QuasiconcaveFn::power(0.5).unwrap()).quasiconcave);
        let square = QuasiconcaveFn::step_approx((1..=8).map(|i| (i as f64, (i * i) as f64)).collect()).unwrap();
        assert!(!quasiconcave_check(&square).quasiconcave);
        assert!(NormSpec::marc_strong(square, hl()).is_err());
        let concave = QuasiconcaveFn::step_approx(vec![(1.0, 1.0), (2.0, 1.5), (4.0, 2.0)]).unwrap();
        assert!(quasiconcave_check(&concave).quasiconcave);
    }

    #[test]
    fn xi_examples() {
        let w = XiWeight::new(rearrangement(&chi(0.0, 3.0))).unwrap();
        assert_eq!(xi_seminorm(&w, &chi(2.0, 5.0)).unwrap(), 3.0);
        assert_eq!(xi_seminorm(&w, &MeasFn::zero(hl()).unwrap()).unwrap(), 0.0);
        assert!(XiWeight::new(Rearranged::zero()).is_err());
    }

    #[test]
    fn profiles() {
        let log = AnalyticProfile::reciprocal_log_clip();
        assert_eq!(log.marc_weak_norm(&QuasiconcaveFn::LogClip).unwrap(), 1.0);
        for n in [2u32, 3] {
            let composed = log.compose_power(n).unwrap();
            assert_eq!(composed.marc_weak_norm(&QuasiconcaveFn::LogClip).unwrap(), n as f64);
        }
        let eps = 1e-6;
        let hyper = log.capped(1.0 / eps).unwrap().compose_exp_recip().unwrap();
        let norm = hyper.marc_weak_norm(&QuasiconcaveFn::LogClip).unwrap();
        let oracle = QuasiconcaveFn::LogClip.eval(eps) / eps;
        assert!((norm - oracle).abs() <= 1e-9 * oracle);
        assert!(norm > 1e4);
        assert_eq!(log.compose_exp_recip().unwrap().marc_weak_norm(&QuasiconcaveFn::LogClip).unwrap(), f64::INFINITY);
    }

    #[test]
    fn spec_json() {
        let s: NormSpec =
            serde_json::from_str(r#"{"kind":"lorentz","p":2,"q":1,"space":{"kind":"lebesgue_half_line"}}"#).unwrap();
        assert_eq!(s, NormSpec::lorentz(2.0, 1.0, hl()).unwrap());
        let s: NormSpec = serde_json::from_str(r#"{"kind":"lp","p":"inf","space":{"kind":"atomic_n"}}"#).unwrap();
        assert_eq!(s.label(), "Linf");
        let s: NormSpec = serde_json::from_str(
            r#"{"kind":"marc_weak","phi":"log_clip","space":{"kind":"lebesgue_interval","length":1}}"#,
        )
        .unwrap();
        assert_eq!(s.label(), "m[logclip]");
        let s: NormSpec =
            serde_json::from_str(r#"{"kind":"marc_strong","phi":{"power":0.5},"space":{"kind":"lebesgue_line"}}"#)
                .unwrap();
        assert_eq!(serde_json::to_value(&s).unwrap()["phi"]["power"], 0.5);
        assert!(serde_json::from_str::<NormSpec>(r#"{"kind":"lp","p":0,"space":{"kind":"atomic_n"}}"#).is_err());
    }

    #[test]
    fn lorentz_with_tiny_q_is_not_nan() {
        assert!(NormSpec::lorentz(2.0, 5e-324, MeasureSpace::half_line()).is_err());
        assert!(NormSpec::lorentz(5e-324, 1e20, MeasureSpace::half_line()).is_err());
        let spec = NormSpec::lorentz(2.0, 1e-300, MeasureSpace::half_line()).unwrap();
        for t in [0.5, 1.0, 3.0] {
            assert!(!fundamental_function(&spec, t).unwrap().is_nan());
        }
        assert!((lorentz_weight(1.0, 4.0, 2.0, 1e-300) - 4f64.ln()).abs() < 1e-15);
        assert!((lorentz_weight(1.0, 4.0, 2.0, 1.0) - 2.0).abs() < 1e-15);
    }
}
