//! The three singular-vorticity objects and their orbit invariants:
//! point vortex configurations, vortex loops (weighted closed curves)
//! and pointed vortex loops, together with the canonical parametrization
//! (constant density pullback, first mark at parameter zero), symmetry
//! detection and quotient canonicalization.

use crate::error::{Error, Result};
use crate::geometry::{periodic_quadrature, ClosedCurve, ScalarOnCurve};
use crate::spectral::Cumulative;
use crate::vec2::Vec2;
use std::f64::consts::TAU;

/// Default relative tolerance for detecting equal circulations and
/// partial vorticities.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// k distinct planar points with nonzero circulations.
#[derive(Debug, Clone)]
pub struct PointVortexConfig {
    points: Vec<Vec2>,
    circulations: Vec<f64>,
}

impl PointVortexConfig {
    pub fn new(points: Vec<Vec2>, circulations: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != circulations.len() {
            return Err(Error::InvalidArgument(
                "need k >= 1 points with matching circulations".into(),
            ));
        }
        if circulations.contains(&0.0) {
            return Err(Error::InvalidArgument("circulations must be nonzero".into()));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (points[i] - points[j]).norm() == 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "points {i} and {j} coincide (fat diagonal)"
                    )));
                }
            }
        }
        Ok(PointVortexConfig { points, circulations })
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn circulations(&self) -> &[f64] {
        &self.circulations
    }
}

/// Closed curve with a strictly positive vorticity density, sampled as
/// the parameter pullback f*β = b(t) dt.
#[derive(Debug, Clone)]
pub struct VortexLoop {
    curve: ClosedCurve,
    density: ScalarOnCurve,
}

impl VortexLoop {
    pub fn new(curve: ClosedCurve, density: ScalarOnCurve) -> Result<Self> {
        if density.len() != curve.n_samples() {
            return Err(Error::InvalidArgument(
                "density sample count does not match curve".into(),
            ));
        }
        if density.values().iter().any(|&b| b <= 0.0) {
            return Err(Error::InvalidArgument(
                "vorticity density must be strictly positive".into(),
            ));
        }
        Ok(VortexLoop { curve, density })
    }

    pub fn curve(&self) -> &ClosedCurve {
        &self.curve
    }

    pub fn density(&self) -> &ScalarOnCurve {
        &self.density
    }

    /// ω = ∫_C β, always positive.
    pub fn total_vorticity(&self) -> f64 {
        periodic_quadrature(&self.density)
    }
}

/// A vortex loop with k marked points carrying extra circulations.
/// Marks are stored as parameter values so they survive resampling.
#[derive(Debug, Clone)]
pub struct PointedVortexLoop {
    vloop: VortexLoop,
    marks: Vec<f64>,
    circulations: Vec<f64>,
}

impl PointedVortexLoop {
    pub fn new(vloop: VortexLoop, marks: Vec<f64>, circulations: Vec<f64>) -> Result<Self> {
        if marks.is_empty() || marks.len() != circulations.len() {
            return Err(Error::InvalidArgument(
                "need k >= 1 marks with matching circulations".into(),
            ));
        }
        if circulations.contains(&0.0) {
            return Err(Error::InvalidArgument("circulations must be nonzero".into()));
        }
        for w in marks.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidArgument(
                    "marks must be strictly increasing".into(),
                ));
            }
        }
        if marks[0] < 0.0 || *marks.last().unwrap() >= TAU {
            return Err(Error::InvalidArgument("marks must lie in [0, 2π)".into()));
        }
        Ok(PointedVortexLoop { vloop, marks, circulations })
    }

    pub fn vortex_loop(&self) -> &VortexLoop {
        &self.vloop
    }

    pub fn curve(&self) -> &ClosedCurve {
        self.vloop.curve()
    }

    pub fn density(&self) -> &ScalarOnCurve {
        self.vloop.density()
    }

    pub fn marks(&self) -> &[f64] {
        &self.marks
    }

    pub fn circulations(&self) -> &[f64] {
        &self.circulations
    }

    pub fn k(&self) -> usize {
        self.marks.len()
    }

    /// Marked points f(s_i) on the curve.
    pub fn marked_points(&self) -> Vec<Vec2> {
        let (sx, sy) = self.curve().spectra();
        self.marks
            .iter()
            .map(|&s| Vec2::new(sx.eval(s), sy.eval(s)))
            .collect()
    }

    pub fn total_vorticity(&self) -> f64 {
        self.vloop.total_vorticity()
    }

    /// Partial vorticities ω_i = ∫ of β over the arc from mark i to
    /// mark i+1, via the cumulative trigonometric antiderivative.
    pub fn partial_vorticities(&self) -> Vec<f64> {
        let cum = Cumulative::from_samples(self.density().values());
        let total = TAU * cum.mean();
        let k = self.k();
        (0..k)
            .map(|i| {
                if i + 1 < k {
                    cum.eval(self.marks[i + 1]) - cum.eval(self.marks[i])
                } else {
                    total - (cum.eval(self.marks[k - 1]) - cum.eval(self.marks[0]))
                }
            })
            .collect()
    }
}

/// Complete coadjoint-orbit data of a pointed vortex loop.
#[derive(Debug, Clone)]
pub struct OrbitInvariants {
    pub area: f64,
    pub partials: Vec<f64>,
    pub circulations: Vec<f64>,
    /// (ℓ, m): smallest shift ℓ leaving both data sequences invariant,
    /// and m = k/ℓ.
    pub symmetry: (usize, usize),
}

/// Canonical mark parameters t_i = 2π (ω_1 + … + ω_{i-1}) / ω.
pub fn canonical_marks(partials: &[f64]) -> Result<Vec<f64>> {
    if partials.is_empty() {
        return Err(Error::InvalidArgument("need at least one partial vorticity".into()));
    }
    if partials.iter().any(|&w| w <= 0.0) {
        return Err(Error::InvalidArgument(
            "partial vorticities must be positive".into(),
        ));
    }
    let total: f64 = partials.iter().sum();
    let mut marks = Vec::with_capacity(partials.len());
    let mut acc = 0.0;
    for &w in partials {
        marks.push(TAU * acc / total);
        acc += w;
    }
    Ok(marks)
}

/// Build the pointed vortex loop Φ(f) for a given embedding: constant
/// density pullback ω/2π and marks at the canonical parameters.
pub fn realize(
    embedding: &ClosedCurve,
    partials: &[f64],
    circulations: &[f64],
) -> Result<PointedVortexLoop> {
    if partials.len() != circulations.len() {
        return Err(Error::InvalidArgument(
            "partial vorticities and circulations must have equal length".into(),
        ));
    }
    let marks = canonical_marks(partials)?;
    let total: f64 = partials.iter().sum();
    let density = ScalarOnCurve::constant(total / TAU, embedding.n_samples());
    PointedVortexLoop::new(
        VortexLoop::new(embedding.clone(), density)?,
        marks,
        circulations.to_vec(),
    )
}

/// Invert Φ: the unique embedding with constant density pullback and
/// f(0) at the first marked point. Obtained by inverting the cumulative
/// density integral (strictly monotone since b > 0) and resampling the
/// curve trigonometrically.
pub fn canonicalize(pvl: &PointedVortexLoop) -> Result<ClosedCurve> {
    let n = pvl.curve().n_samples();
    let cum = Cumulative::from_samples(pvl.density().values());
    let rate = cum.mean(); // ω / 2π
    let s1 = pvl.marks()[0];
    let base = cum.eval(s1);
    let (sx, sy) = pvl.curve().spectra();
    let mut points = Vec::with_capacity(n);
    for j in 0..n {
        let tau = TAU * j as f64 / n as f64;
        // Solve B(s) = B(s1) + (ω/2π) τ on the monotone branch
        // starting at s1.
        let s = cum.invert(base + rate * tau, s1, s1 + TAU);
        points.push(Vec2::new(sx.eval(s), sy.eval(s)));
    }
    ClosedCurve::new(points)
}

/// Smallest divisor ℓ of k such that both sequences are invariant under
/// a shift by ℓ, within relative tolerance; returns (ℓ, m = k/ℓ).
pub fn symmetry_period(circulations: &[f64], partials: &[f64], tol: f64) -> (usize, usize) {
    let k = circulations.len();
    assert_eq!(k, partials.len(), "data sequences must have equal length");
    assert!(k >= 1);
    let scale_g = circulations.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let scale_w = partials.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let shift_invariant = |seq: &[f64], l: usize, scale: f64| {
        (0..k).all(|i| (seq[(i + l) % k] - seq[i]).abs() <= tol * scale)
    };
    for l in 1..=k {
        if !k.is_multiple_of(l) {
            continue;
        }
        if shift_invariant(circulations, l, scale_g) && shift_invariant(partials, l, scale_w) {
            return (l, k / l);
        }
    }
    unreachable!("l = k always satisfies the shift condition");
}

/// Representative of the ℤ_m orbit of a canonical embedding: the
/// parameter rotation f∘R_{2πj/m} with lexicographically smallest
/// sample sequence.
pub fn zm_canonical_rep(embedding: &ClosedCurve, m: usize) -> Result<ClosedCurve> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if m == 1 {
        return Ok(embedding.clone());
    }
    let n = embedding.n_samples();
    let candidate = |j: usize| -> Vec<Vec2> {
        if (n * j).is_multiple_of(m) {
            // integer sample shift: exact
            let shift = n * j / m;
            (0..n).map(|i| embedding.points()[(i + shift) % n]).collect()
        } else {
            let (sx, sy) = embedding.spectra();
            let off = TAU * j as f64 / m as f64;
            (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64 + off;
                    Vec2::new(sx.eval(t), sy.eval(t))
                })
                .collect()
        }
    };
    let mut best = candidate(0);
    for j in 1..m {
        let cand = candidate(j);
        if lex_less(&cand, &best) {
            best = cand;
        }
    }
    ClosedCurve::new(best)
}

fn lex_less(a: &[Vec2], b: &[Vec2]) -> bool {
    for (p, q) in a.iter().zip(b) {
        if p.x != q.x {
            return p.x < q.x;
        }
        if p.y != q.y {
            return p.y < q.y;
        }
    }
    false
}

/// Group indices by equal circulation values (within tolerance);
/// blocks are reported in order of first occurrence, indices 0-based.
pub fn point_partition(circulations: &[f64]) -> Vec<Vec<usize>> {
    let scale = circulations
        .iter()
        .fold(1.0f64, |m, &v| m.max(v.abs()));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, &g) in circulations.iter().enumerate() {
        match blocks
            .iter_mut()
            .find(|b| (circulations[b[0]] - g).abs() <= SYMMETRY_TOL * scale)
        {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    blocks
}

pub fn orbit_invariants(pvl: &PointedVortexLoop) -> OrbitInvariants {
    let partials = pvl.partial_vorticities();
    let symmetry = symmetry_period(pvl.circulations(), &partials, SYMMETRY_TOL);
    OrbitInvariants {
        area: pvl.curve().enclosed_area(),
        partials,
        circulations: pvl.circulations().to_vec(),
        symmetry,
    }
}

/// Onsager-Feynman integrality test: is aω within tol of 2πℤ?
pub fn is_prequantizable(a: f64, omega: f64, tol: f64) -> bool {
    let product = a * omega;
    let nearest = (product / TAU).round() * TAU;
    (product - nearest).abs() <= tol
}
