//! Fixing bracket entries: contraction cascades down to Jacobi pairs.

use multivector::{Form, MultiVector};
use scalar_expr::{Expr, SampleBox};

use crate::candidate::StructureError;
use crate::report::VerificationReport;

/// A bivector with its companion vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiPair {
    pub lambda: MultiVector,
    pub z: MultiVector,
}

fn sign(p: usize) -> i64 {
    if p % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Fix the last entry of the bracket of `(η, 𝓔)` to `f`:
/// `(ι_{dF}η + (−1)^{k+1} F 𝓔, ι_{dF}𝓔)`.
pub fn contract_step(eta: &MultiVector, e: &MultiVector, f: &Expr) -> (MultiVector, MultiVector) {
    let k = eta.order();
    let df = Form::differential(eta.dim(), f);
    let main = eta.contract(&df).add(&e.scale(f).scale_int(sign(k + 1)));
    (main, e.contract(&df))
}

/// Fix the entries `F₃,…,F_k` one at a time, last entry first.
pub fn cascade_stepwise(eta: &MultiVector, e: Option<&MultiVector>, fixers: &[Expr]) -> Result<JacobiPair, StructureError> {
    check_fixers(eta, fixers)?;
    let mut cur = (eta.clone(), e.cloned().unwrap_or_else(|| MultiVector::zero(eta.dim(), eta.order() - 1)));
    for f in fixers.iter().rev() {
        cur = contract_step(&cur.0, &cur.1, f);
    }
    Ok(JacobiPair { lambda: cur.0, z: cur.1 })
}

/// Closed form of the cascade:
/// `Λ = ι_{dF₃∧…∧dF_k}η + Σ_{j=0}^{k−3} (−1)^{k+1−j} F_{k−j} ι_{dF₃∧…dF̂_{k−j}…∧dF_k}𝓔`,
/// `Z = ι_{dF₃∧…∧dF_k}𝓔`.
pub fn cascade_contract(eta: &MultiVector, e: Option<&MultiVector>, fixers: &[Expr]) -> Result<JacobiPair, StructureError> {
    check_fixers(eta, fixers)?;
    let k = eta.order();
    let n = eta.dim();
    let forms: Vec<Form> = fixers.iter().map(|f| Form::differential(n, f)).collect();
    let mut lambda = eta.contract_all(&forms);
    let z = match e {
        Some(e) if !e.is_zero() => {
            for j in 0..k - 2 {
                // F_{k−j} sits at position k−j−3 of the fixer list
                let pos = k - j - 3;
                let rest: Vec<Form> =
                    forms.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, f)| f.clone()).collect();
                let term = e.contract_all(&rest).scale(&fixers[pos]).scale_int(sign(k + 1 - j));
                lambda = lambda.add(&term);
            }
            e.contract_all(&forms)
        }
        _ => MultiVector::zero(n, 1),
    };
    Ok(JacobiPair { lambda, z })
}

fn check_fixers(eta: &MultiVector, fixers: &[Expr]) -> Result<(), StructureError> {
    let k = eta.order();
    if k < 2 || fixers.len() != k - 2 {
        return Err(StructureError::Arity { expected: k.saturating_sub(2), got: fixers.len() });
    }
    Ok(())
}

/// Fix the second and third entries of a 3-vector:
/// `Λ¹ = −ι_{dH₁}η`, `Λ² = ι_{dH₂}η`, with the three Poisson/compatibility checks.
pub fn fix_entries(
    eta: &MultiVector,
    h1: &Expr,
    h2: &Expr,
    bx: &SampleBox,
) -> Result<(MultiVector, MultiVector, VerificationReport), StructureError> {
    if eta.order() != 3 {
        return Err(StructureError::Arity { expected: 3, got: eta.order() });
    }
    let n = eta.dim();
    let l1 = eta.contract(&Form::differential(n, h1)).neg();
    let l2 = eta.contract(&Form::differential(n, h2));
    let mut report = VerificationReport::new();
    report.record("lambda1_poisson", &l1.sn_bracket(&l1).check_zero(bx)?, vec![]);
    report.record("lambda2_poisson", &l2.sn_bracket(&l2).check_zero(bx)?, vec![]);
    report.record("lambda1_lambda2_compatible", &l1.sn_bracket(&l2).check_zero(bx)?, vec![]);
    Ok((l1, l2, report))
}

/// The two Jacobi pairs of a 3-Nambu–Jacobi pair obtained by fixing `H₁`
/// (second entry) and `H₂` (third entry):
/// `(Λ¹,Z¹) = (−ι_{dH₁}η − H₁𝓔, −ι_{dH₁}𝓔)`, `(Λ²,Z²) = (ι_{dH₂}η + H₂𝓔, ι_{dH₂}𝓔)`.
pub fn nj_jacobi_pairs(eta: &MultiVector, e: &MultiVector, h1: &Expr, h2: &Expr) -> (JacobiPair, JacobiPair) {
    let (l1, z1) = contract_step(eta, e, h1);
    let (l2, z2) = contract_step(eta, e, h2);
    (JacobiPair { lambda: l1.neg(), z: z1.neg() }, JacobiPair { lambda: l2, z: z2 })
}

/// `[Λ,Λ] + 2Z∧Λ = 0` and `[Z,Λ] = 0`.
pub fn jacobi_identities(p: &JacobiPair, bx: &SampleBox) -> Result<VerificationReport, StructureError> {
    let mut r = VerificationReport::new();
    let a = p.lambda.sn_bracket(&p.lambda).add(&p.z.wedge(&p.lambda).scale_int(2));
    r.record("jacobi_lambda", &a.check_zero(bx)?, vec![]);
    r.record("jacobi_z", &p.z.sn_bracket(&p.lambda).check_zero(bx)?, vec![]);
    Ok(r)
}

/// Compatibility of two Jacobi pairs:
/// `[Λ¹,Λ²] = Z¹∧Λ² + Z²∧Λ¹` and `[Z¹,Λ²] + [Z²,Λ¹] = 0`.
pub fn compatibility(p: &JacobiPair, q: &JacobiPair, bx: &SampleBox) -> Result<VerificationReport, StructureError> {
    let mut r = VerificationReport::new();
    let lhs = p.lambda.sn_bracket(&q.lambda);
    let rhs = p.z.wedge(&q.lambda).add(&q.z.wedge(&p.lambda));
    r.record("compatibility_lambda", &lhs.check_equal(&rhs, bx)?, vec![]);
    let z = p.z.sn_bracket(&q.lambda).add(&q.z.sn_bracket(&p.lambda));
    r.record("compatibility_z", &z.check_zero(bx)?, vec![]);
    Ok(r)
}
