//! Energies of planar elastic curves and curve networks.
//!
//! The crate computes the closed Figure-Eight elastica from Jacobi elliptic
//! functions, closed-form competitor networks (circle, double bubble, angle
//! triples), Euler-Lagrange and junction residuals of sampled geometry, and
//! the scaling identities relating bending energy and length.

pub mod competitors;
pub mod curve;
pub mod elastica;
pub mod elliptic;
pub mod geom;
pub mod network;
pub mod numerics;
pub mod rescale;

pub use competitors::{AngleTriple, CompetitorError, CompetitorGeometry};
pub use curve::{CurveError, EnergyReport, SampledCurve};
pub use elastica::{ElasticaError, ElasticaParams};
pub use elliptic::{EllipticError, EllipticParameter};
pub use geom::Vec2;
pub use network::{Classification, End, Junction, Network, NetworkCurve, NetworkError};
pub use numerics::{Bracket, NumericsError, Tolerance};
pub use rescale::{FunctionalValues, HomogeneityPair, RescaleError};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Elastica(#[from] ElasticaError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Competitor(#[from] CompetitorError),
    #[error(transparent)]
    Rescale(#[from] RescaleError),
}

pub type Result<T> = std::result::Result<T, Error>;
