//! Hamiltonian systems and their vector fields.

use conformal_atlas::GlobalPair;
use multivector::{Form, MultiVector};
use scalar_expr::{EvalError, Expr};
use structures::{Candidate, Kind, StructureError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("{kind} takes {expected} Hamiltonians, got {got}")]
    HamiltonianCount { kind: Kind, expected: usize, got: usize },
    #[error("Hamiltonian {0} uses a coordinate outside the chart")]
    Chart(usize),
    #[error("initial point has {got} coordinates, the system has {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("initial point lies outside the integration box")]
    OutsideBox,
    #[error("step must be positive and the end time non-negative")]
    Step,
    #[error("vector field evaluation failed at step {step}: {source}")]
    Eval { step: usize, source: EvalError },
    #[error("state blew up at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },
    #[error("diagnostic {0} needs auxiliary functions that were not supplied")]
    MissingAuxiliary(&'static str),
    #[error("diagnostic {law} does not apply to {kind}")]
    NotApplicable { law: &'static str, kind: Kind },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A structure with its Hamiltonians (`arity − 1` of them) and an optional
/// integration box.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSystem {
    candidate: Candidate,
    hamiltonians: Vec<Expr>,
    bounds: Option<Vec<[f64; 2]>>,
}

impl HamiltonianSystem {
    pub fn new(candidate: Candidate, hamiltonians: Vec<Expr>) -> Result<Self, DynamicsError> {
        let kind = candidate.kind();
        let expected = kind.arity() - 1;
        if hamiltonians.len() != expected {
            return Err(DynamicsError::HamiltonianCount { kind, expected, got: hamiltonians.len() });
        }
        if let Some(i) = hamiltonians.iter().position(|h| h.max_var().is_some_and(|v| v >= candidate.dim())) {
            return Err(DynamicsError::Chart(i));
        }
        Ok(HamiltonianSystem { candidate, hamiltonians, bounds: None })
    }

    /// System of a glued locally conformal pair.
    pub fn from_global(gp: &GlobalPair, hamiltonians: Vec<Expr>) -> Result<Self, DynamicsError> {
        Self::new(gp.candidate(), hamiltonians)
    }

    pub fn with_bounds(mut self, bounds: Vec<[f64; 2]>) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn candidate(&self) -> &Candidate {
        &self.candidate
    }

    pub fn kind(&self) -> Kind {
        self.candidate.kind()
    }

    pub fn dim(&self) -> usize {
        self.candidate.dim()
    }

    pub fn hamiltonians(&self) -> &[Expr] {
        &self.hamiltonians
    }

    pub fn bounds(&self) -> Option<&[[f64; 2]]> {
        self.bounds.as_deref()
    }

    pub fn vector_field(&self) -> MultiVector {
        field_of(self.candidate.eta(), self.candidate.companion(), &self.hamiltonians)
    }

    /// The part `ι_{dH₁∧…∧dH_{k−1}}η` of the vector field.
    pub fn eta_part(&self) -> MultiVector {
        field_of(self.candidate.eta(), None, &self.hamiltonians)
    }

    /// The part `Σᵢ (−1)ⁱ Hᵢ ι_{dH₁∧…dĤᵢ…∧dH_{k−1}} 𝓔` of the vector field.
    pub fn companion_part(&self) -> MultiVector {
        self.vector_field().sub(&self.eta_part())
    }
}

fn differentials(dim: usize, hs: &[Expr]) -> Vec<Form> {
    hs.iter().map(|h| Form::differential(dim, h)).collect()
}

/// `ι_{dH₁∧…∧dH_{k−1}}η + Σᵢ (−1)ⁱ Hᵢ ι_{dH₁∧…dĤᵢ…∧dH_{k−1}}𝓔`; without a
/// companion this is the Poisson or Nambu Hamiltonian vector field, and for
/// `k = 2` it is `ι_{dH}Λ − HZ`.
pub fn field_of(eta: &MultiVector, companion: Option<&MultiVector>, hs: &[Expr]) -> MultiVector {
    let forms = differentials(eta.dim(), hs);
    let mut x = eta.contract_all(&forms);
    if let Some(e) = companion.filter(|e| !e.is_zero()) {
        for (i, h) in hs.iter().enumerate() {
            let rest: Vec<Form> = forms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
            let term = e.contract_all(&rest).scale(h);
            // i is zero based: (−1)^{i+1}
            x = if i % 2 == 0 { x.sub(&term) } else { x.add(&term) };
        }
    }
    x
}

/// Hamiltonian vector field of a system.
pub fn hamiltonian_vector_field(sys: &HamiltonianSystem) -> MultiVector {
    sys.vector_field()
}
