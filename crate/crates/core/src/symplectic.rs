//! Symplectic forms on the three configuration spaces, the canonical
//! pairing with its non-degeneracy spectrum, momentum maps, and the
//! polarization evaluator.
//!
//! The bulk weight `c` plays ω/2π and the node weights play the mark
//! circulations Γ_i throughout; all bulk integrals are parameter-space
//! quadratures on the uniform grid, all node evaluations go through
//! trigonometric interpolation.

use crate::error::{Error, Result};
use crate::geometry::{periodic_quadrature, ClosedCurve, DecomposedTangent, ScalarOnCurve};
use crate::hamiltonian::HamiltonianExpr;
use crate::objects::{PointVortexConfig, PointedVortexLoop, VortexLoop};
use crate::spectral::Spectrum;
use crate::vec2::Vec2;
use nalgebra::DMatrix;
use std::f64::consts::TAU;

/// Bulk weight plus weighted nodes of the canonical pairing
/// ⟨⟨ρ,λ⟩⟩ = c ∫ρλ dt + Σ c_i ρ(t_i)λ(t_i).
#[derive(Debug, Clone)]
pub struct PairingSpec {
    pub c: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PairingSpec {
    pub fn new(c: f64, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if c == 0.0 {
            return Err(Error::InvalidArgument("bulk weight c must be nonzero".into()));
        }
        if nodes.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "nodes and weights must have equal length".into(),
            ));
        }
        if weights.contains(&0.0) {
            return Err(Error::InvalidArgument("node weights must be nonzero".into()));
        }
        if !nodes.is_empty() {
            for w in nodes.windows(2) {
                if w[1] <= w[0] {
                    return Err(Error::InvalidArgument(
                        "nodes must be strictly increasing".into(),
                    ));
                }
            }
            if nodes[0] < 0.0 || *nodes.last().unwrap() >= TAU {
                return Err(Error::InvalidArgument("nodes must lie in [0, 2π)".into()));
            }
        }
        Ok(PairingSpec { c, nodes, weights })
    }

    /// Spec carried by a pointed vortex loop: c = ω/2π, nodes at the
    /// marks, weights the mark circulations.
    pub fn from_pointed(pvl: &PointedVortexLoop) -> Self {
        PairingSpec {
            c: pvl.total_vorticity() / TAU,
            nodes: pvl.marks().to_vec(),
            weights: pvl.circulations().to_vec(),
        }
    }

    pub fn k(&self) -> usize {
        self.nodes.len()
    }
}

/// ω^Γ on point configurations: Σ Γ_i ω(u_i, v_i).
pub fn omega_gamma(config: &PointVortexConfig, u: &[Vec2], v: &[Vec2]) -> Result<f64> {
    let k = config.k();
    if u.len() != k || v.len() != k {
        return Err(Error::InvalidArgument(format!(
            "tangent vectors must have length {k}"
        )));
    }
    Ok(config
        .circulations()
        .iter()
        .zip(u.iter().zip(v))
        .map(|(&g, (a, b))| g * a.omega(*b))
        .sum())
}

/// Ω on embeddings: (ω_total/2π) ∫ ω(u(t), v(t)) dt.
pub fn omega_emb(curve: &ClosedCurve, omega_total: f64, u: &[Vec2], v: &[Vec2]) -> Result<f64> {
    let n = curve.n_samples();
    if u.len() != n || v.len() != n {
        return Err(Error::InvalidArgument(format!(
            "tangent fields must be sampled on the {n}-point grid"
        )));
    }
    let integrand: Vec<f64> = u.iter().zip(v).map(|(a, b)| a.omega(*b)).collect();
    Ok(omega_total / TAU * periodic_quadrature(&ScalarOnCurve::new(integrand)))
}

fn field_spectra(u: &[Vec2]) -> (Spectrum, Spectrum) {
    let xs: Vec<f64> = u.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = u.iter().map(|p| p.y).collect();
    (Spectrum::from_samples(&xs), Spectrum::from_samples(&ys))
}

/// Ω^{Γω̄} on pointed embeddings: bulk term plus node terms at the
/// marks, node values by trigonometric interpolation.
pub fn omega_pointed(curve: &ClosedCurve, spec: &PairingSpec, u: &[Vec2], v: &[Vec2]) -> Result<f64> {
    let n = curve.n_samples();
    if u.len() != n || v.len() != n {
        return Err(Error::InvalidArgument(format!(
            "tangent fields must be sampled on the {n}-point grid"
        )));
    }
    let integrand: Vec<f64> = u.iter().zip(v).map(|(a, b)| a.omega(*b)).collect();
    let mut total = spec.c * periodic_quadrature(&ScalarOnCurve::new(integrand));
    if !spec.nodes.is_empty() {
        let (ux, uy) = field_spectra(u);
        let (vx, vy) = field_spectra(v);
        for (&t, &g) in spec.nodes.iter().zip(&spec.weights) {
            let a = Vec2::new(ux.eval(t), uy.eval(t));
            let b = Vec2::new(vx.eval(t), vy.eval(t));
            total += g * a.omega(b);
        }
    }
    Ok(total)
}

/// Canonical pairing ⟨⟨ρ,λ⟩⟩ = c ∫ρλ dt + Σ c_i ρ(t_i)λ(t_i).
pub fn pairing(rho: &ScalarOnCurve, lam: &ScalarOnCurve, spec: &PairingSpec) -> f64 {
    let product: Vec<f64> = rho
        .values()
        .iter()
        .zip(lam.values())
        .map(|(&r, &l)| r * l)
        .collect();
    let mut total = spec.c * periodic_quadrature(&ScalarOnCurve::new(product));
    if !spec.nodes.is_empty() {
        let sr = rho.spectrum();
        let sl = lam.spectrum();
        for (&t, &ci) in spec.nodes.iter().zip(&spec.weights) {
            total += ci * sr.eval(t) * sl.eval(t);
        }
    }
    total
}

/// Ω^{Γω̄} in canonical (ρ, λ) coordinates:
/// ⟨⟨ρ₂,λ₁⟩⟩ − ⟨⟨ρ₁,λ₂⟩⟩.
pub fn omega_pointed_canonical(
    d1: &DecomposedTangent,
    d2: &DecomposedTangent,
    spec: &PairingSpec,
) -> f64 {
    pairing(&d2.rho, &d1.lambda, spec) - pairing(&d1.rho, &d2.lambda, spec)
}

/// Reduced form Ω_a^ω at [f]: c ∫(ρ₂λ₁ − ρ₁λ₂) dt. Invariant under
/// λ_i ↦ λ_i + const because the ρ's have zero mean.
pub fn reduced_form(
    rho1: &ScalarOnCurve,
    lam1: &ScalarOnCurve,
    rho2: &ScalarOnCurve,
    lam2: &ScalarOnCurve,
    c: f64,
) -> f64 {
    let pair = |r: &ScalarOnCurve, l: &ScalarOnCurve| {
        let product: Vec<f64> = r.values().iter().zip(l.values()).map(|(&a, &b)| a * b).collect();
        c * periodic_quadrature(&ScalarOnCurve::new(product))
    };
    pair(rho2, lam1) - pair(rho1, lam2)
}

/// Singular values of the pairing matrix between the zero-mean
/// trigonometric basis {cos jt, sin jt; j = 1..M} (left) and
/// {1, cos jt, sin jt; j = 1..M} (right), sorted descending.
///
/// The rows already annihilate the constant, so the 2M × (2M+1) matrix
/// has exactly 2M singular values; for k = 0 they are all equal to cπ.
pub fn pairing_gram_spectrum(spec: &PairingSpec, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    if m < spec.k() {
        return Err(Error::InvalidArgument(format!(
            "M = {m} must be at least the node count {}",
            spec.k()
        )));
    }
    let n = (4 * m + 4).next_power_of_two().max(64);
    let sample = |f: &dyn Fn(f64) -> f64| -> ScalarOnCurve {
        ScalarOnCurve::new((0..n).map(|j| f(TAU * j as f64 / n as f64)).collect())
    };
    let mut left: Vec<ScalarOnCurve> = Vec::with_capacity(2 * m);
    for j in 1..=m {
        let jj = j as f64;
        left.push(sample(&|t| (jj * t).cos()));
        left.push(sample(&|t| (jj * t).sin()));
    }
    let mut right: Vec<ScalarOnCurve> = vec![sample(&|_| 1.0)];
    for j in 1..=m {
        let jj = j as f64;
        right.push(sample(&|t| (jj * t).cos()));
        right.push(sample(&|t| (jj * t).sin()));
    }
    let mat = DMatrix::from_fn(left.len(), right.len(), |i, j| {
        pairing(&left[i], &right[j], spec)
    });
    let mut sv: Vec<f64> = mat.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// ⟨J(x₁..x_k), h⟩ = Σ Γ_i h(x_i).
pub fn momentum_point(config: &PointVortexConfig, h: &HamiltonianExpr) -> f64 {
    config
        .circulations()
        .iter()
        .zip(config.points())
        .map(|(&g, &p)| g * h.eval(p))
        .sum()
}

/// ⟨J(C,β), h⟩ = ∫ h(f(t)) b(t) dt.
pub fn momentum_loop(vl: &VortexLoop, h: &HamiltonianExpr) -> f64 {
    let integrand: Vec<f64> = vl
        .curve()
        .points()
        .iter()
        .zip(vl.density().values())
        .map(|(&p, &b)| h.eval(p) * b)
        .collect();
    periodic_quadrature(&ScalarOnCurve::new(integrand))
}

/// ⟨J(f), h⟩ = loop term + Σ Γ_i h(f(s_i)).
pub fn momentum_pointed(pvl: &PointedVortexLoop, h: &HamiltonianExpr) -> f64 {
    let marks = pvl.marked_points();
    momentum_loop(pvl.vortex_loop(), h)
        + pvl
            .circulations()
            .iter()
            .zip(&marks)
            .map(|(&g, &p)| g * h.eval(p))
            .sum::<f64>()
}

/// A vorticity functional of any of the three kinds, paired with test
/// Hamiltonians.
#[derive(Debug, Clone)]
pub enum MomentumFunctional {
    Point(PointVortexConfig),
    Loop(VortexLoop),
    Pointed(PointedVortexLoop),
}

impl MomentumFunctional {
    pub fn pair(&self, h: &HamiltonianExpr) -> f64 {
        match self {
            MomentumFunctional::Point(c) => momentum_point(c, h),
            MomentumFunctional::Loop(l) => momentum_loop(l, h),
            MomentumFunctional::Pointed(p) => momentum_pointed(p, h),
        }
    }
}

/// Dictionary surrogate for functional equality: do the two momenta
/// agree on every test Hamiltonian within tol·max(1, |⟨m1,h⟩|)?
pub fn momentum_equal(
    m1: &MomentumFunctional,
    m2: &MomentumFunctional,
    dict: &[HamiltonianExpr],
    tol: f64,
) -> bool {
    assert!(!dict.is_empty(), "dictionary must be nonempty");
    dict.iter().all(|h| {
        let a = m1.pair(h);
        let b = m2.pair(h);
        (a - b).abs() <= tol * a.abs().max(1.0)
    })
}

/// Split a pointed vortex loop into its loop part and its marked-point
/// configuration (the symplectic product embedding j).
pub fn product_embed(pvl: &PointedVortexLoop) -> Result<(VortexLoop, PointVortexConfig)> {
    let config = PointVortexConfig::new(pvl.marked_points(), pvl.circulations().to_vec())?;
    Ok((pvl.vortex_loop().clone(), config))
}

/// ⟨(C,β,(x_i)), [X_{h₁},X_{h₂}]⟩: the momentum of the pointed loop
/// evaluated on the Poisson bracket {h₁, h₂}.
pub fn polarization_pairing(pvl: &PointedVortexLoop, h1: &HamiltonianExpr, h2: &HamiltonianExpr) -> f64 {
    let integrand: Vec<f64> = pvl
        .curve()
        .points()
        .iter()
        .zip(pvl.density().values())
        .map(|(&p, &b)| h1.poisson_bracket(h2, p) * b)
        .collect();
    let marks = pvl.marked_points();
    periodic_quadrature(&ScalarOnCurve::new(integrand))
        + pvl
            .circulations()
            .iter()
            .zip(&marks)
            .map(|(&g, &p)| g * h1.poisson_bracket(h2, p))
            .sum::<f64>()
}

/// Magnitude scale for the polarization test: the same sum with every
/// contribution in absolute value, floored at 1.
pub fn polarization_scale(pvl: &PointedVortexLoop, h1: &HamiltonianExpr, h2: &HamiltonianExpr) -> f64 {
    let integrand: Vec<f64> = pvl
        .curve()
        .points()
        .iter()
        .zip(pvl.density().values())
        .map(|(&p, &b)| (h1.poisson_bracket(h2, p) * b).abs())
        .collect();
    let marks = pvl.marked_points();
    let total = periodic_quadrature(&ScalarOnCurve::new(integrand))
        + pvl
            .circulations()
            .iter()
            .zip(&marks)
            .map(|(&g, &p)| (g * h1.poisson_bracket(h2, p)).abs())
            .sum::<f64>();
    total.max(1.0)
}
