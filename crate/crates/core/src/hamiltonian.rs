//! Compactly supported test Hamiltonians on the plane, their vector
//! fields X_h = (∂h/∂y, −∂h/∂x) and flows.
//!
//! Two families of terms are supported: radial bumps, and tube
//! functions adapted to a closed curve (used to generate the subgroup
//! of flows preserving the curve, and for the transitivity
//! reconstruction). Gradients are analytic throughout so that
//! i_{X_h}ω = dh holds to rounding, not to a difference scheme.

use crate::error::{Error, Result};
use crate::geometry::{ClosedCurve, ScalarOnCurve};
use crate::spectral::Spectrum;
use crate::vec2::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Radial smooth bump: h(x) = A · χ(|x−c|/r) with
/// χ(q) = exp(p (1 − 1/(1−q²))) inside the unit disc, 0 outside.
#[derive(Debug, Clone)]
pub struct BumpHamiltonian {
    pub center: Vec2,
    pub radius: f64,
    pub amplitude: f64,
    pub exponent: f64,
}

impl BumpHamiltonian {
    pub fn new(center: Vec2, radius: f64, amplitude: f64, exponent: f64) -> Self {
        assert!(radius > 0.0 && exponent > 0.0);
        BumpHamiltonian { center, radius, amplitude, exponent }
    }

    fn profile(&self, q: f64) -> f64 {
        if q >= 1.0 {
            0.0
        } else {
            (self.exponent * (1.0 - 1.0 / (1.0 - q * q))).exp()
        }
    }

    /// dχ/dq = −2pq/(1−q²)² · χ(q)
    fn profile_deriv(&self, q: f64) -> f64 {
        if q >= 1.0 {
            0.0
        } else {
            let u = 1.0 - q * q;
            -2.0 * self.exponent * q / (u * u) * self.profile(q)
        }
    }

    pub fn eval(&self, x: Vec2) -> f64 {
        let q = (x - self.center).norm() / self.radius;
        self.amplitude * self.profile(q)
    }

    pub fn grad(&self, x: Vec2) -> Vec2 {
        let d = x - self.center;
        let r = d.norm();
        if r == 0.0 || r >= self.radius {
            return Vec2::ZERO;
        }
        let q = r / self.radius;
        d * (self.amplitude * self.profile_deriv(q) / (self.radius * r))
    }
}

/// Transverse profile for tube terms: ψ(s) = exp(1 − 1/(1−s²)) with an
/// optional linear skew (1 + skew·s) so the normal derivative on the
/// curve can be made nonzero while the value stays constant there.
#[derive(Debug, Clone, Copy)]
pub struct TubeProfile {
    pub skew: f64,
}

impl TubeProfile {
    pub fn even() -> Self {
        TubeProfile { skew: 0.0 }
    }

    pub fn skewed(skew: f64) -> Self {
        assert!(skew.abs() < 1.0, "skew must keep the profile single-signed at 0");
        TubeProfile { skew }
    }

    fn psi(s: f64) -> f64 {
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    }

    fn psi_deriv(s: f64) -> f64 {
        if s.abs() >= 1.0 {
            0.0
        } else {
            let u = 1.0 - s * s;
            -2.0 * s / (u * u) * Self::psi(s)
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        (1.0 + self.skew * s) * Self::psi(s)
    }

    pub fn deriv(&self, s: f64) -> f64 {
        self.skew * Self::psi(s) + (1.0 + self.skew * s) * Self::psi_deriv(s)
    }
}

/// Cached interpolants and frame data of a reference curve, shared by
/// tube terms and used for nearest-point projection.
#[derive(Debug)]
pub struct TubeCoords {
    sx: Spectrum,
    sy: Spectrum,
    dx: Spectrum,
    dy: Spectrum,
    ddx: Spectrum,
    ddy: Spectrum,
    dense: Vec<Vec2>,
    pub reach: f64,
}

/// Result of projecting a point into tube coordinates.
#[derive(Debug, Clone, Copy)]
pub struct TubePoint {
    /// Foot parameter on the curve.
    pub s: f64,
    /// Signed distance, positive on the normal side.
    pub d: f64,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub speed: f64,
    pub curvature: f64,
}

impl TubeCoords {
    pub fn new(curve: &ClosedCurve) -> Result<Arc<Self>> {
        let (sx, sy) = curve.spectra();
        let dx = sx.derivative();
        let dy = sy.derivative();
        let ddx = dx.derivative();
        let ddy = dy.derivative();
        let m = 4 * curve.n_samples();
        let dense = (0..m)
            .map(|j| {
                let t = TAU * j as f64 / m as f64;
                Vec2::new(sx.eval(t), sy.eval(t))
            })
            .collect();
        let reach = reach_estimate(curve)?;
        Ok(Arc::new(TubeCoords { sx, sy, dx, dy, ddx, ddy, dense, reach }))
    }

    pub fn point(&self, t: f64) -> Vec2 {
        Vec2::new(self.sx.eval(t), self.sy.eval(t))
    }

    fn velocity(&self, t: f64) -> Vec2 {
        Vec2::new(self.dx.eval(t), self.dy.eval(t))
    }

    fn acceleration(&self, t: f64) -> Vec2 {
        Vec2::new(self.ddx.eval(t), self.ddy.eval(t))
    }

    /// Nearest-point projection: dense-grid seed plus Newton iterations
    /// on (x − f(s))·f'(s) = 0.
    pub fn project(&self, x: Vec2) -> TubePoint {
        let m = self.dense.len();
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, p) in self.dense.iter().enumerate() {
            let d = (x - *p).norm_sq();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        let mut s = TAU * best as f64 / m as f64;
        for _ in 0..12 {
            let f = self.point(s);
            let v = self.velocity(s);
            let a = self.acceleration(s);
            let phi = (x - f).dot(v);
            let dphi = (x - f).dot(a) - v.norm_sq();
            if dphi == 0.0 {
                break;
            }
            let step = phi / dphi;
            s -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        let f = self.point(s);
        let v = self.velocity(s);
        let speed = v.norm();
        let tangent = v / speed;
        let normal = tangent.rot90();
        let d = (x - f).dot(normal);
        let a = self.acceleration(s);
        let curvature = v.omega(a) / speed.powi(3);
        TubePoint { s, d, tangent, normal, speed, curvature }
    }
}

/// Estimated tubular-neighborhood radius: curvature bound combined with
/// half the minimum distance between parameter-distant samples.
pub fn reach_estimate(curve: &ClosedCurve) -> Result<f64> {
    let kappa = curve.curvature()?;
    let max_kappa = kappa.values().iter().fold(0.0f64, |m, &k| m.max(k.abs()));
    let mut reach = if max_kappa > 0.0 { 1.0 / max_kappa } else { f64::INFINITY };
    let pts = curve.points();
    let n = pts.len();
    let min_sep = n / 8;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (j - i).min(n - (j - i));
            if gap < min_sep {
                continue;
            }
            let d = (pts[i] - pts[j]).norm();
            if 0.5 * d < reach {
                reach = 0.5 * d;
            }
        }
    }
    Ok(reach)
}

/// Longitudinal dependence of a tube term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TubeKind {
    /// h = g(s) χ(d/w): value g on the curve, flat in the normal
    /// direction when the profile is even.
    Value,
    /// h = d · g(s) χ(d/w): zero on the curve with normal derivative g.
    NormalLinear,
}

/// Curve-adapted compactly supported Hamiltonian term.
#[derive(Debug, Clone)]
pub struct CurveTubeTerm {
    coords: Arc<TubeCoords>,
    half_width: f64,
    longitudinal: Arc<Spectrum>,
    kind: TubeKind,
    profile: TubeProfile,
}

impl CurveTubeTerm {
    pub fn new(
        coords: Arc<TubeCoords>,
        half_width: f64,
        longitudinal: &ScalarOnCurve,
        kind: TubeKind,
        profile: TubeProfile,
    ) -> Result<Self> {
        if half_width <= 0.0 {
            return Err(Error::InvalidArgument("tube half-width must be positive".into()));
        }
        if half_width > coords.reach {
            return Err(Error::TubeOverlap { width: half_width, reach: coords.reach });
        }
        Ok(CurveTubeTerm {
            coords,
            half_width,
            longitudinal: Arc::new(longitudinal.spectrum()),
            kind,
            profile,
        })
    }

    pub fn eval(&self, x: Vec2) -> f64 {
        let tp = self.coords.project(x);
        if tp.d.abs() >= self.half_width {
            return 0.0;
        }
        let g = self.longitudinal.eval(tp.s);
        let chi = self.profile.eval(tp.d / self.half_width);
        match self.kind {
            TubeKind::Value => g * chi,
            TubeKind::NormalLinear => tp.d * g * chi,
        }
    }

    pub fn grad(&self, x: Vec2) -> Vec2 {
        let tp = self.coords.project(x);
        if tp.d.abs() >= self.half_width {
            return Vec2::ZERO;
        }
        let w = self.half_width;
        let g = self.longitudinal.eval(tp.s);
        let gp = self.longitudinal.derivative().eval(tp.s);
        let chi = self.profile.eval(tp.d / w);
        let chip = self.profile.deriv(tp.d / w);
        // ∇s = t / (|f'| (1 − d κ)), ∇d = n in tube coordinates
        let grad_s = tp.tangent / (tp.speed * (1.0 - tp.d * tp.curvature));
        let grad_d = tp.normal;
        match self.kind {
            TubeKind::Value => grad_s * (gp * chi) + grad_d * (g * chip / w),
            TubeKind::NormalLinear => {
                grad_s * (tp.d * gp * chi) + grad_d * (g * (chi + tp.d * chip / w))
            }
        }
    }
}

/// Finite sum of bump and tube terms.
#[derive(Debug, Clone, Default)]
pub struct HamiltonianExpr {
    terms: Vec<Term>,
}

#[derive(Debug, Clone)]
pub enum Term {
    Bump(BumpHamiltonian),
    Tube(CurveTubeTerm),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    ImplicitMidpoint,
}

impl From<BumpHamiltonian> for HamiltonianExpr {
    fn from(b: BumpHamiltonian) -> Self {
        HamiltonianExpr { terms: vec![Term::Bump(b)] }
    }
}

impl From<CurveTubeTerm> for HamiltonianExpr {
    fn from(t: CurveTubeTerm) -> Self {
        HamiltonianExpr { terms: vec![Term::Tube(t)] }
    }
}

impl HamiltonianExpr {
    pub fn from_terms(terms: Vec<Term>) -> Self {
        HamiltonianExpr { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, x: Vec2) -> f64 {
        self.terms
            .iter()
            .map(|t| match t {
                Term::Bump(b) => b.eval(x),
                Term::Tube(tt) => tt.eval(x),
            })
            .sum()
    }

    pub fn grad(&self, x: Vec2) -> Vec2 {
        let mut g = Vec2::ZERO;
        for t in &self.terms {
            g += match t {
                Term::Bump(b) => b.grad(x),
                Term::Tube(tt) => tt.grad(x),
            };
        }
        g
    }

    /// Hamiltonian vector field X_h = (∂h/∂y, −∂h/∂x), so i_{X_h}ω = dh
    /// for ω = dx ∧ dy.
    pub fn field(&self, x: Vec2) -> Vec2 {
        let g = self.grad(x);
        Vec2::new(g.y, -g.x)
    }

    /// Canonical Poisson bracket {h₁, h₂}(x) = ω(X_{h₁}, X_{h₂})(x).
    pub fn poisson_bracket(&self, other: &HamiltonianExpr, x: Vec2) -> f64 {
        let g1 = self.grad(x);
        let g2 = other.grad(x);
        g1.x * g2.y - g1.y * g2.x
    }

    /// Time-T flow of X_h starting at x0 with step size dt.
    pub fn flow(&self, x0: Vec2, t_final: f64, dt: f64, scheme: Scheme) -> Result<Vec2> {
        assert!(dt > 0.0, "dt must be positive");
        let mut x = x0;
        let mut remaining = t_final.abs();
        let sign = t_final.signum();
        while remaining > 0.0 {
            let h = dt.min(remaining) * sign;
            x = match scheme {
                Scheme::Rk4 => self.rk4_step(x, h),
                Scheme::ImplicitMidpoint => self.midpoint_step(x, h)?,
            };
            remaining -= dt.min(remaining);
        }
        Ok(x)
    }

    fn rk4_step(&self, x: Vec2, h: f64) -> Vec2 {
        let k1 = self.field(x);
        let k2 = self.field(x + k1 * (h / 2.0));
        let k3 = self.field(x + k2 * (h / 2.0));
        let k4 = self.field(x + k3 * h);
        x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }

    fn midpoint_step(&self, x: Vec2, h: f64) -> Result<Vec2> {
        let mut mid = x + self.field(x) * (h / 2.0);
        for iter in 0..200 {
            let next = x + self.field(mid) * (h / 2.0);
            let delta = (next - mid).norm();
            mid = next;
            if delta < 1e-14 {
                return Ok(x + self.field(mid) * h);
            }
            if iter == 199 {
                break;
            }
        }
        Err(Error::NoConvergence { iters: 200 })
    }
}

/// Tube Hamiltonian constant along the reference curve; its field is
/// tangent to the curve, so its flow preserves the curve as a set.
///
/// The transverse profile is skewed so that the field does not vanish
/// on the curve itself.
#[derive(Debug, Clone)]
pub struct CurveConstantHamiltonian {
    term: CurveTubeTerm,
    pub strength: f64,
    pub half_width: f64,
}

impl CurveConstantHamiltonian {
    pub fn expr(&self) -> HamiltonianExpr {
        self.term.clone().into()
    }
}

pub fn curve_constant_hamiltonian(
    curve: &ClosedCurve,
    half_width: f64,
    strength: f64,
) -> Result<CurveConstantHamiltonian> {
    let coords = TubeCoords::new(curve)?;
    let term = CurveTubeTerm::new(
        coords,
        half_width,
        &ScalarOnCurve::constant(strength, curve.n_samples()),
        TubeKind::Value,
        TubeProfile::skewed(0.5),
    )?;
    Ok(CurveConstantHamiltonian { term, strength, half_width })
}

/// Curve-preserving Hamiltonian that vanishes on the curve and whose
/// field along the curve is tangent with longitudinally varying
/// magnitude: h = A(s) · d · χ(d/w), A a bump around s0.
pub fn localized_tangent_hamiltonian(
    curve: &ClosedCurve,
    half_width: f64,
    s0: f64,
    longitudinal_width: f64,
    strength: f64,
) -> Result<HamiltonianExpr> {
    let coords = TubeCoords::new(curve)?;
    let n = curve.n_samples();
    let bump = |t: f64| {
        let mut d = (t - s0).rem_euclid(TAU);
        if d > TAU / 2.0 {
            d -= TAU;
        }
        let q = d / longitudinal_width;
        if q.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - q * q)).exp()
        }
    };
    let long = ScalarOnCurve::new((0..n).map(|j| strength * bump(TAU * j as f64 / n as f64)).collect());
    let term = CurveTubeTerm::new(coords, half_width, &long, TubeKind::NormalLinear, TubeProfile::even())?;
    Ok(term.into())
}

/// Bump whose field at f(s) is transverse to the curve: centered at
/// f(s) offset along the tangent by radius/2, so the rotational field
/// at f(s) points along the normal.
pub fn transverse_hamiltonian(curve: &ClosedCurve, s: f64, radius: f64) -> Result<BumpHamiltonian> {
    if radius <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let coords = TubeCoords::new(curve)?;
    let p = coords.point(s);
    let v = Vec2::new(coords.dx.eval(s), coords.dy.eval(s));
    let tangent = v.normalize();
    Ok(BumpHamiltonian::new(p + tangent * (radius / 2.0), radius, 1.0, 1.0))
}

/// Seeded dictionary of random bumps, the sampling surrogate for
/// "for all h in C_c^∞".
#[derive(Debug, Clone)]
pub struct DictionaryConfig {
    pub seed: u64,
    pub size: usize,
    pub center_box: f64,
    pub radius_range: (f64, f64),
    pub amplitude_range: (f64, f64),
}

impl Default for DictionaryConfig {
    fn default() -> Self {
        DictionaryConfig {
            seed: 0,
            size: 64,
            center_box: 3.0,
            radius_range: (0.4, 1.2),
            amplitude_range: (0.5, 1.5),
        }
    }
}

pub fn bump_dictionary(cfg: &DictionaryConfig) -> Vec<HamiltonianExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.size)
        .map(|_| {
            let c = Vec2::new(
                rng.gen_range(-cfg.center_box..cfg.center_box),
                rng.gen_range(-cfg.center_box..cfg.center_box),
            );
            let r = rng.gen_range(cfg.radius_range.0..cfg.radius_range.1);
            let a = rng.gen_range(cfg.amplitude_range.0..cfg.amplitude_range.1);
            BumpHamiltonian::new(c, r, a, 1.0).into()
        })
        .collect()
}
