//! Lift of a locally conformal 3-Nambu–Poisson pair to order four.

use multivector::MultiVector;
use scalar_expr::{Expr, SampleBox};
use structures::{compatibility, jacobi_identities, nj_jacobi_pairs, JacobiPair, VerificationReport};

use crate::atlas::AtlasError;
use crate::glue::GlobalPair;

/// `η⁴ = Λ¹∧Λ²` and `𝓔³ = Z¹∧Λ² + Z²∧Λ¹` built from the two Jacobi pairs
/// obtained by fixing `H¹` and `H²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub eta4: MultiVector,
    pub companion3: MultiVector,
    pub pairs: (JacobiPair, JacobiPair),
    pub report: VerificationReport,
}

/// Build the lift and check `𝓔³ = ι_θ η⁴`, both Jacobi pairs and their
/// compatibility.
///
/// Report names: `lift_companion`, `pair1.jacobi_lambda`, `pair1.jacobi_z`,
/// `pair2.*`, `compatibility_lambda`, `compatibility_z`.
pub fn lift_to_4gp(gp: &GlobalPair, h1: &Expr, h2: &Expr, bx: &SampleBox) -> Result<Lift, AtlasError> {
    if gp.order() != 3 {
        return Err(AtlasError::Order { expected: 3, got: gp.order() });
    }
    let (p, q) = nj_jacobi_pairs(&gp.eta, &gp.companion, h1, h2);
    let eta4 = p.lambda.wedge(&q.lambda);
    let companion3 = p.z.wedge(&q.lambda).add(&q.z.wedge(&p.lambda));
    let mut report = VerificationReport::new();
    report.record("lift_companion", &companion3.check_equal(&eta4.contract(&gp.theta), bx)?, vec![]);
    report.extend_prefixed("pair1.", jacobi_identities(&p, bx)?);
    report.extend_prefixed("pair2.", jacobi_identities(&q, bx)?);
    report.extend_prefixed("", compatibility(&p, &q, bx)?);
    Ok(Lift { eta4, companion3, pairs: (p, q), report })
}
