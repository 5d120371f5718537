//! Discrete closed planar curves with spectral-accuracy primitives.
//!
//! A [`ClosedCurve`] holds uniform-parameter samples of an embedding
//! f: S¹ → ℝ². All geometric quantities (frames, enclosed area, arc
//! measure) are computed from the trigonometric interpolant, so they
//! converge spectrally for analytic curves.

use crate::error::{Error, Result};
use crate::spectral::Spectrum;
use crate::vec2::Vec2;
use std::f64::consts::TAU;

pub const MIN_SAMPLES: usize = 16;

/// Relative speed threshold below which a curve counts as degenerate.
const DEGENERATE_SPEED_REL: f64 = 1e-10;

/// Uniformly sampled periodic planar curve.
///
/// Invariants checked at construction: the sample count is a power of
/// two ≥ 16, consecutive samples are distinct, and the sample polyline
/// is simple.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    points: Vec<Vec2>,
}

/// Positively oriented orthonormal frame along a curve, with the
/// parametric speed |f'|. The normal is the tangent rotated by +π/2,
/// so omega(t, n) = 1 at every sample.
#[derive(Debug, Clone)]
pub struct FrameField {
    pub tangents: Vec<Vec2>,
    pub normals: Vec<Vec2>,
    pub speed: Vec<f64>,
}

/// Samples of a periodic scalar function on a curve's parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarOnCurve {
    values: Vec<f64>,
}

impl ScalarOnCurve {
    pub fn new(values: Vec<f64>) -> Self {
        ScalarOnCurve { values }
    }

    pub fn constant(value: f64, n: usize) -> Self {
        ScalarOnCurve { values: vec![value; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_samples(&self.values)
    }
}

/// Normal/tangential components (ρ, λ) of a curve variation
/// u = (ρ n + λ t) ∘ f.
#[derive(Debug, Clone)]
pub struct DecomposedTangent {
    pub rho: ScalarOnCurve,
    pub lambda: ScalarOnCurve,
}

impl ClosedCurve {
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        let n = points.len();
        if n < MIN_SAMPLES || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "curve needs a power-of-two sample count >= {MIN_SAMPLES}, got {n}"
            )));
        }
        for j in 0..n {
            let d = points[(j + 1) % n] - points[j];
            if d.norm() == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "consecutive samples {j} and {} coincide",
                    (j + 1) % n
                )));
            }
        }
        check_simple(&points)?;
        Ok(ClosedCurve { points })
    }

    /// Uniform samples of the circle of given radius, counterclockwise.
    pub fn circle(radius: f64, n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|j| {
                    let t = TAU * j as f64 / n as f64;
                    Vec2::new(radius * t.cos(), radius * t.sin())
                })
                .collect(),
        )
    }

    /// Axis-aligned ellipse (a cos t, b sin t).
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|j| {
                    let t = TAU * j as f64 / n as f64;
                    Vec2::new(a * t.cos(), b * t.sin())
                })
                .collect(),
        )
    }

    pub fn n_samples(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    /// Parameter value of sample j.
    pub fn param(&self, j: usize) -> f64 {
        TAU * j as f64 / self.points.len() as f64
    }

    /// Component spectra (x(t), y(t)) of the interpolant.
    pub fn spectra(&self) -> (Spectrum, Spectrum) {
        let xs: Vec<f64> = self.points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.y).collect();
        (Spectrum::from_samples(&xs), Spectrum::from_samples(&ys))
    }

    /// Evaluate the interpolant at an arbitrary parameter. Prefer
    /// [`CurveInterp`] when evaluating many times.
    pub fn eval(&self, t: f64) -> Vec2 {
        let (sx, sy) = self.spectra();
        Vec2::new(sx.eval(t), sy.eval(t))
    }

    /// Trigonometric resampling to an m-point grid.
    pub fn resample(&self, m: usize) -> Result<ClosedCurve> {
        if m < MIN_SAMPLES || !m.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "resample target must be a power of two >= {MIN_SAMPLES}, got {m}"
            )));
        }
        if m == self.n_samples() {
            return Ok(self.clone());
        }
        let (sx, sy) = self.spectra();
        let xs = sx.resample(m);
        let ys = sy.resample(m);
        ClosedCurve::new(xs.into_iter().zip(ys).map(|(x, y)| Vec2::new(x, y)).collect())
    }

    /// Frame by spectral differentiation of the interpolant.
    pub fn frame(&self) -> Result<FrameField> {
        let (sx, sy) = self.spectra();
        let dx = sx.derivative().resample(self.n_samples());
        let dy = sy.derivative().resample(self.n_samples());
        let speed: Vec<f64> = dx.iter().zip(&dy).map(|(&x, &y)| x.hypot(y)).collect();
        let mean_speed = speed.iter().sum::<f64>() / speed.len() as f64;
        if let Some(index) = speed.iter().position(|&s| s < DEGENERATE_SPEED_REL * mean_speed) {
            return Err(Error::DegenerateCurve { index });
        }
        let tangents: Vec<Vec2> = dx
            .iter()
            .zip(&dy)
            .zip(&speed)
            .map(|((&x, &y), &s)| Vec2::new(x / s, y / s))
            .collect();
        let normals = tangents.iter().map(|t| t.rot90()).collect();
        Ok(FrameField { tangents, normals, speed })
    }

    /// Enclosed area ∫ f*ν with ν = ½(x dy − y dx); the sign follows
    /// the orientation of the parametrization.
    pub fn enclosed_area(&self) -> f64 {
        let (sx, sy) = self.spectra();
        let n = self.n_samples();
        let dx = sx.derivative().resample(n);
        let dy = sy.derivative().resample(n);
        let integrand: Vec<f64> = self
            .points
            .iter()
            .zip(dx.iter().zip(&dy))
            .map(|(p, (&vx, &vy))| 0.5 * (p.x * vy - p.y * vx))
            .collect();
        periodic_quadrature(&ScalarOnCurve::new(integrand))
    }

    /// Arc measure samples |f'(t_j)|, so ∫_C g μ_C ≈ (2π/N) Σ g_j s_j.
    pub fn arc_measure(&self) -> Result<ScalarOnCurve> {
        Ok(ScalarOnCurve::new(self.frame()?.speed))
    }

    pub fn arc_length(&self) -> Result<f64> {
        Ok(periodic_quadrature(&self.arc_measure()?))
    }

    /// Signed curvature κ = ω(f', f'') / |f'|³.
    pub fn curvature(&self) -> Result<ScalarOnCurve> {
        let (sx, sy) = self.spectra();
        let n = self.n_samples();
        let d1x = sx.derivative();
        let d1y = sy.derivative();
        let dx = d1x.resample(n);
        let dy = d1y.resample(n);
        let ddx = d1x.derivative().resample(n);
        let ddy = d1y.derivative().resample(n);
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            let speed = dx[j].hypot(dy[j]);
            if speed == 0.0 {
                return Err(Error::DegenerateCurve { index: j });
            }
            values.push((dx[j] * ddy[j] - dy[j] * ddx[j]) / speed.powi(3));
        }
        Ok(ScalarOnCurve::new(values))
    }
}

/// Trapezoid rule on the uniform periodic grid: (2π/N) Σ values.
/// Exact for trigonometric polynomials below the Nyquist frequency.
pub fn periodic_quadrature(values: &ScalarOnCurve) -> f64 {
    let n = values.len();
    assert!(n > 0, "quadrature of empty sample vector");
    values.values().iter().sum::<f64>() * TAU / n as f64
}

/// Split a tangent field into (ρ, λ) against the curve frame.
pub fn decompose_tangent(curve: &ClosedCurve, u: &[Vec2]) -> Result<DecomposedTangent> {
    if u.len() != curve.n_samples() {
        return Err(Error::InvalidArgument(format!(
            "tangent field has {} entries, curve has {}",
            u.len(),
            curve.n_samples()
        )));
    }
    let frame = curve.frame()?;
    let rho = u.iter().zip(&frame.normals).map(|(v, n)| v.dot(*n)).collect();
    let lambda = u.iter().zip(&frame.tangents).map(|(v, t)| v.dot(*t)).collect();
    Ok(DecomposedTangent {
        rho: ScalarOnCurve::new(rho),
        lambda: ScalarOnCurve::new(lambda),
    })
}

pub fn recompose_tangent(curve: &ClosedCurve, d: &DecomposedTangent) -> Result<Vec<Vec2>> {
    if d.rho.len() != curve.n_samples() || d.lambda.len() != curve.n_samples() {
        return Err(Error::InvalidArgument(
            "decomposed tangent length does not match curve".into(),
        ));
    }
    let frame = curve.frame()?;
    Ok((0..curve.n_samples())
        .map(|j| frame.normals[j] * d.rho.values()[j] + frame.tangents[j] * d.lambda.values()[j])
        .collect())
}

/// Does the normal component ρ have zero integral against the arc
/// measure (tangency to the fixed-area submanifold)?
pub fn is_area_tangent(curve: &ClosedCurve, d: &DecomposedTangent, tol: f64) -> bool {
    let speed = match curve.arc_measure() {
        Ok(s) => s,
        Err(_) => return false,
    };
    let weighted: Vec<f64> = d
        .rho
        .values()
        .iter()
        .zip(speed.values())
        .map(|(&r, &s)| r * s)
        .collect();
    let flux = periodic_quadrature(&ScalarOnCurve::new(weighted));
    let length = periodic_quadrature(&speed);
    let max_rho = d.rho.values().iter().fold(0.0f64, |m, &r| m.max(r.abs()));
    flux.abs() <= tol * length * max_rho.max(f64::MIN_POSITIVE)
}

/// Project ρ onto the zero-arc-integral subspace by subtracting its
/// weighted mean.
pub fn project_area_tangent(curve: &ClosedCurve, rho: &ScalarOnCurve) -> Result<ScalarOnCurve> {
    let speed = curve.arc_measure()?;
    let weighted: Vec<f64> = rho
        .values()
        .iter()
        .zip(speed.values())
        .map(|(&r, &s)| r * s)
        .collect();
    let mean = periodic_quadrature(&ScalarOnCurve::new(weighted))
        / periodic_quadrature(&speed);
    Ok(ScalarOnCurve::new(
        rho.values().iter().map(|&r| r - mean).collect(),
    ))
}

fn check_simple(points: &[Vec2]) -> Result<()> {
    let n = points.len();
    // Bounding-box pruned O(N²) pass over non-adjacent segment pairs.
    let seg = |i: usize| (points[i], points[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = seg(i);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // adjacent around the seam
            }
            let (c, d) = seg(j);
            if a.x.max(b.x) < c.x.min(d.x)
                || c.x.max(d.x) < a.x.min(b.x)
                || a.y.max(b.y) < c.y.min(d.y)
                || c.y.max(d.y) < a.y.min(b.y)
            {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Err(Error::NotSimple { i, j });
            }
        }
    }
    Ok(())
}

fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let orient = |p: Vec2, q: Vec2, r: Vec2| (q - p).omega(r - p);
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |p: Vec2, q: Vec2, r: Vec2| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (d1 == 0.0 && on_segment(a, b, c))
        || (d2 == 0.0 && on_segment(a, b, d))
        || (d3 == 0.0 && on_segment(c, d, a))
        || (d4 == 0.0 && on_segment(c, d, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_sample_counts() {
        assert!(ClosedCurve::circle(1.0, 8).is_err());
        assert!(ClosedCurve::circle(1.0, 48).is_err());
        assert!(ClosedCurve::circle(1.0, 64).is_ok());
    }

    #[test]
    fn rejects_self_intersection() {
        // Figure-eight-ish polyline.
        let n = 16;
        let pts: Vec<Vec2> = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                Vec2::new((2.0 * t).sin(), t.sin())
            })
            .collect();
        assert!(matches!(ClosedCurve::new(pts), Err(Error::NotSimple { .. })));
    }

    #[test]
    fn resample_circle_is_exact() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        let r = c.resample(128).unwrap();
        for (j, p) in r.points().iter().enumerate() {
            let t = TAU * j as f64 / 128.0;
            assert!((*p - Vec2::new(t.cos(), t.sin())).norm() < 1e-12);
        }
        // identity case
        let same = c.resample(64).unwrap();
        assert_eq!(same.points(), c.points());
    }

    #[test]
    fn resample_ellipse_matches_analytic() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 32).unwrap();
        let r = c.resample(256).unwrap();
        for (j, p) in r.points().iter().enumerate() {
            let t = TAU * j as f64 / 256.0;
            assert!((*p - Vec2::new(2.0 * t.cos(), t.sin())).norm() < 1e-10);
        }
    }

    #[test]
    fn resample_round_trip_band_limited() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 64).unwrap();
        let back = c.resample(128).unwrap().resample(64).unwrap();
        for (p, q) in c.points().iter().zip(back.points()) {
            assert!((*p - *q).norm() < 1e-12);
        }
    }

    #[test]
    fn frame_unit_circle() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        let f = c.frame().unwrap();
        for j in 0..64 {
            let t = c.param(j);
            assert!((f.tangents[j] - Vec2::new(-t.sin(), t.cos())).norm() < 1e-12);
            assert!((f.normals[j] - Vec2::new(-t.cos(), -t.sin())).norm() < 1e-12);
            assert!((f.speed[j] - 1.0).abs() < 1e-12);
            assert!((f.tangents[j].omega(f.normals[j]) - 1.0).abs() < 1e-12);
            assert!(f.tangents[j].dot(f.normals[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_radius_two_speed() {
        let c = ClosedCurve::circle(2.0, 64).unwrap();
        let f = c.frame().unwrap();
        assert!(f.speed.iter().all(|&s| (s - 2.0).abs() < 1e-12));
    }

    #[test]
    fn frame_ellipse_speed() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 128).unwrap();
        let f = c.frame().unwrap();
        for j in 0..128 {
            let t = c.param(j);
            let exact = (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt();
            assert!((f.speed[j] - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn area_circle_orientations() {
        let ccw = ClosedCurve::circle(1.0, 64).unwrap();
        assert!((ccw.enclosed_area() - PI).abs() < 1e-12);
        let cw = ClosedCurve::new(ccw.points().iter().rev().cloned().collect()).unwrap();
        assert!((cw.enclosed_area() + PI).abs() < 1e-12);
    }

    #[test]
    fn area_ellipse() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 64).unwrap();
        assert!((c.enclosed_area() - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn arc_measure_circles() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        assert!(c.arc_measure().unwrap().values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        let c3 = ClosedCurve::circle(3.0, 64).unwrap();
        assert!((c3.arc_length().unwrap() - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn arc_length_ellipse_against_fine_quadrature() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 256).unwrap();
        // brute-force fine-grid quadrature of the analytic speed
        let m = 1 << 16;
        let oracle: f64 = (0..m)
            .map(|j| {
                let t = TAU * j as f64 / m as f64;
                (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt()
            })
            .sum::<f64>()
            * TAU
            / m as f64;
        assert!((c.arc_length().unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn quadrature_harmonics() {
        let n = 64;
        let ones = ScalarOnCurve::constant(1.0, n);
        assert!((periodic_quadrature(&ones) - TAU).abs() < 1e-14);
        let cost = ScalarOnCurve::new((0..n).map(|j| (TAU * j as f64 / n as f64).cos()).collect());
        assert!(periodic_quadrature(&cost).abs() < 1e-14);
        let cos2 = ScalarOnCurve::new(
            (0..n).map(|j| (TAU * j as f64 / n as f64).cos().powi(2)).collect(),
        );
        assert!((periodic_quadrature(&cos2) - PI).abs() < 1e-13);
    }

    #[test]
    fn decompose_recompose_circle() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        let f = c.frame().unwrap();
        let d = decompose_tangent(&c, &f.normals).unwrap();
        assert!(d.rho.values().iter().all(|&r| (r - 1.0).abs() < 1e-12));
        assert!(d.lambda.values().iter().all(|&l| l.abs() < 1e-12));

        // u = f' on the unit circle: pure rotation generator, (0, 1)
        let fp: Vec<Vec2> = f
            .tangents
            .iter()
            .zip(&f.speed)
            .map(|(t, &s)| *t * s)
            .collect();
        let d2 = decompose_tangent(&c, &fp).unwrap();
        assert!(d2.rho.values().iter().all(|&r| r.abs() < 1e-12));
        assert!(d2.lambda.values().iter().all(|&l| (l - 1.0).abs() < 1e-12));

        let u = recompose_tangent(&c, &d).unwrap();
        for (a, b) in u.iter().zip(&f.normals) {
            assert!((*a - *b).norm() < 1e-14);
        }
    }

    #[test]
    fn decompose_round_trip_random_field_on_ellipse() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 128).unwrap();
        let u: Vec<Vec2> = (0..128)
            .map(|j| {
                let t = c.param(j);
                Vec2::new((2.0 * t).sin() + 0.3 * (5.0 * t).cos(), t.cos() - 0.7 * (3.0 * t).sin())
            })
            .collect();
        let d = decompose_tangent(&c, &u).unwrap();
        let back = recompose_tangent(&c, &d).unwrap();
        for (a, b) in u.iter().zip(&back) {
            assert!((*a - *b).norm() < 1e-14);
        }
    }

    #[test]
    fn decompose_length_mismatch() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        assert!(decompose_tangent(&c, &[Vec2::ZERO; 32]).is_err());
    }

    #[test]
    fn area_tangency() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        let n = c.n_samples();
        let cos_rho = ScalarOnCurve::new((0..n).map(|j| c.param(j).cos()).collect());
        let lam = ScalarOnCurve::constant(0.0, n);
        let d = DecomposedTangent { rho: cos_rho, lambda: lam.clone() };
        assert!(is_area_tangent(&c, &d, 1e-12));

        let d_bad = DecomposedTangent {
            rho: ScalarOnCurve::constant(1.0, n),
            lambda: lam,
        };
        assert!(!is_area_tangent(&c, &d_bad, 1e-12));
    }

    #[test]
    fn projected_rho_is_area_tangent_on_ellipse() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 128).unwrap();
        let raw = ScalarOnCurve::new(
            (0..128).map(|j| (c.param(j) - 1.0).cos().powi(2)).collect(),
        );
        let rho = project_area_tangent(&c, &raw).unwrap();
        let d = DecomposedTangent { rho, lambda: ScalarOnCurve::constant(0.0, 128) };
        assert!(is_area_tangent(&c, &d, 1e-12));
    }

    #[test]
    fn spectral_area_convergence_on_reparametrized_ellipse() {
        // Same image as the (2, 1) ellipse, area 2π, but with a
        // non-trivial parametrization so the quadrature error is visible.
        let curve = |n: usize| {
            ClosedCurve::new(
                (0..n)
                    .map(|j| {
                        let t = TAU * j as f64 / n as f64;
                        let th = t + 0.3 * t.sin();
                        Vec2::new(2.0 * th.cos(), th.sin())
                    })
                    .collect(),
            )
            .unwrap()
        };
        let e32 = (curve(32).enclosed_area() - TAU).abs();
        let e64 = (curve(64).enclosed_area() - TAU).abs();
        assert!(e64 <= (1e-3 * e32).max(1e-13), "e32={e32:e} e64={e64:e}");
    }
}
