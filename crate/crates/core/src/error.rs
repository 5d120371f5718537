use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate curve: near-zero speed at sample {index}")]
    DegenerateCurve { index: usize },

    #[error("curve is not simple: segments {i} and {j} intersect")]
    NotSimple { i: usize, j: usize },

    #[error("tube half-width {width} exceeds curve reach estimate {reach}")]
    TubeOverlap { width: f64, reach: f64 },

    #[error("singular kernel evaluation {dist:e} away from a vortex element (delta = 0)")]
    Singularity { dist: f64 },

    #[error("implicit solve did not converge after {iters} iterations")]
    NoConvergence { iters: usize },

    #[error("tangent field is not area-preserving: mean normal flux {flux:e}")]
    NotAreaTangent { flux: f64 },

    #[error("simulation halted at t = {time}: {reason}")]
    SimulationHalt { time: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
