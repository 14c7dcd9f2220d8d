use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {order} outside supported range 0..={max}")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("non-finite argument")]
    NonFiniteArgument,
    #[error("function is singular at zero argument")]
    ZeroArgument,
    #[error("source and observation points coincide")]
    CoincidentPoints,
    #[error("zero frequency")]
    ZeroFrequency,
    #[error("frequency must lie in the closed upper half-plane")]
    LowerHalfPlane,
    #[error("point at r = {r} lies inside sphere of radius {radius}")]
    InsideSphere { r: f64, radius: f64 },
    #[error("evaluation frequency within {detune:e} of transition pole {pole}")]
    NearResonance { pole: f64, detune: f64 },
    #[error("permittivity {eps_re}+{eps_im}i too close to the plasmon pole at -2")]
    PlasmonResonance { eps_re: f64, eps_im: f64 },
    #[error("quadrature did not converge (partial value {partial}, error {error_estimate:e})")]
    UnconvergedQuadrature { partial: f64, error_estimate: f64 },
    #[error("integrand returned a non-finite value at {at}")]
    NonFiniteIntegrand { at: f64 },
    #[error("poles {a} and {b} closer than the excision support")]
    PoleSpacingTooSmall { a: f64, b: f64 },
    #[error("damping extrapolation diverged")]
    ExtrapolationDiverged,
    #[error("Mie denominator underflowed at order {order}")]
    DenominatorUnderflow { order: usize },
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("invalid constants: {0}")]
    InvalidConstants(String),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("sphere cannot reproduce the requested polarizability: {0}")]
    InfeasibleSphereFit(String),
}
