//! Tensor data tagged with a claimed structure kind.

use std::fmt;

use multivector::MultiVector;
use scalar_expr::SampleError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("{kind} needs a main tensor of order {expected}, got {got}")]
    MainOrder { kind: Kind, expected: usize, got: usize },
    #[error("{kind} needs a companion of order {expected}, got {got}")]
    CompanionOrder { kind: Kind, expected: usize, got: usize },
    #[error("{0} requires a companion tensor")]
    MissingCompanion(Kind),
    #[error("{0} takes no companion tensor")]
    UnexpectedCompanion(Kind),
    #[error("generalized structures need an even order, got {0}")]
    OddOrder(usize),
    #[error("Nambu structures need order at least 2, got {0}")]
    SmallOrder(usize),
    #[error("tensors live on charts of dimension {0} and {1}")]
    Chart(usize, usize),
    #[error("expected {expected} functions, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("function family is empty")]
    EmptyFamily,
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Structure kinds; the payload is the bracket arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Poisson,
    Jacobi,
    NambuPoisson(usize),
    NambuJacobi(usize),
    GeneralizedPoisson(usize),
    GeneralizedJacobi(usize),
}

impl Kind {
    /// Number of arguments of the bracket, equal to the main tensor order.
    pub fn arity(self) -> usize {
        match self {
            Kind::Poisson | Kind::Jacobi => 2,
            Kind::NambuPoisson(k) | Kind::NambuJacobi(k) => k,
            Kind::GeneralizedPoisson(k) | Kind::GeneralizedJacobi(k) => k,
        }
    }

    /// Jacobi-type kinds carry a companion of order `arity − 1`.
    pub fn has_companion(self) -> bool {
        matches!(self, Kind::Jacobi | Kind::NambuJacobi(_) | Kind::GeneralizedJacobi(_))
    }

    /// The kind obtained by dropping the companion.
    pub fn conservative(self) -> Kind {
        match self {
            Kind::Jacobi => Kind::Poisson,
            Kind::NambuJacobi(k) => Kind::NambuPoisson(k),
            Kind::GeneralizedJacobi(k) => Kind::GeneralizedPoisson(k),
            other => other,
        }
    }

    /// The Jacobi-type kind of the same arity.
    pub fn with_companion(self) -> Kind {
        match self {
            Kind::Poisson => Kind::Jacobi,
            Kind::NambuPoisson(k) => Kind::NambuJacobi(k),
            Kind::GeneralizedPoisson(k) => Kind::GeneralizedJacobi(k),
            other => other,
        }
    }

    /// Short schema name used in files.
    pub fn tag(self) -> &'static str {
        match self {
            Kind::Poisson => "poisson",
            Kind::Jacobi => "jacobi",
            Kind::NambuPoisson(_) => "np",
            Kind::NambuJacobi(_) => "nj",
            Kind::GeneralizedPoisson(_) => "gp",
            Kind::GeneralizedJacobi(_) => "gj",
        }
    }

    /// Inverse of [`Kind::tag`] with an explicit order.
    pub fn from_tag(tag: &str, order: usize) -> Option<Kind> {
        Some(match tag {
            "poisson" => Kind::Poisson,
            "jacobi" => Kind::Jacobi,
            "np" => Kind::NambuPoisson(order),
            "nj" => Kind::NambuJacobi(order),
            "gp" => Kind::GeneralizedPoisson(order),
            "gj" => Kind::GeneralizedJacobi(order),
            _ => return None,
        })
    }

    fn check(self) -> Result<(), StructureError> {
        match self {
            Kind::NambuPoisson(k) | Kind::NambuJacobi(k) if k < 2 => Err(StructureError::SmallOrder(k)),
            Kind::GeneralizedPoisson(k) | Kind::GeneralizedJacobi(k) if k == 0 || k % 2 == 1 => {
                Err(StructureError::OddOrder(k))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Poisson => write!(f, "Poisson"),
            Kind::Jacobi => write!(f, "Jacobi"),
            Kind::NambuPoisson(k) => write!(f, "{k}-Nambu-Poisson"),
            Kind::NambuJacobi(k) => write!(f, "{k}-Nambu-Jacobi"),
            Kind::GeneralizedPoisson(k) => write!(f, "{k}-generalized Poisson"),
            Kind::GeneralizedJacobi(k) => write!(f, "{k}-generalized Jacobi"),
        }
    }
}

/// A main tensor `η` and optional companion `𝓔` with a claimed kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    kind: Kind,
    eta: MultiVector,
    companion: Option<MultiVector>,
}

impl Candidate {
    pub fn new(kind: Kind, eta: MultiVector, companion: Option<MultiVector>) -> Result<Self, StructureError> {
        kind.check()?;
        let k = kind.arity();
        if eta.order() != k && !eta.is_zero() {
            return Err(StructureError::MainOrder { kind, expected: k, got: eta.order() });
        }
        match (&companion, kind.has_companion()) {
            (None, true) => return Err(StructureError::MissingCompanion(kind)),
            (Some(_), false) => return Err(StructureError::UnexpectedCompanion(kind)),
            (Some(e), true) => {
                if e.dim() != eta.dim() {
                    return Err(StructureError::Chart(eta.dim(), e.dim()));
                }
                if e.order() != k - 1 && !e.is_zero() {
                    return Err(StructureError::CompanionOrder { kind, expected: k - 1, got: e.order() });
                }
            }
            (None, false) => {}
        }
        Ok(Candidate { kind, eta, companion })
    }

    pub fn poisson(lambda: MultiVector) -> Result<Self, StructureError> {
        Candidate::new(Kind::Poisson, lambda, None)
    }

    pub fn jacobi(lambda: MultiVector, z: MultiVector) -> Result<Self, StructureError> {
        Candidate::new(Kind::Jacobi, lambda, Some(z))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    pub fn eta(&self) -> &MultiVector {
        &self.eta
    }

    pub fn companion(&self) -> Option<&MultiVector> {
        self.companion.as_ref()
    }

    /// Companion, or the zero tensor of order `k − 1` for conservative kinds.
    pub fn companion_or_zero(&self) -> MultiVector {
        self.companion.clone().unwrap_or_else(|| MultiVector::zero(self.dim(), self.arity() - 1))
    }
}
