//! k-ary brackets generated by a tensor pair.

use multivector::{Form, MultiVector};
use scalar_expr::Expr;

use crate::candidate::{Candidate, StructureError};

/// `{F₁,…,F_k} = η(dF₁,…,dF_k) + Σᵢ (−1)^{i+1} Fᵢ 𝓔(dF₁,…,dF̂ᵢ,…,dF_k)`.
///
/// With a zero companion this is the Nambu (or Poisson) bracket of `η`; for
/// `k = 2` it is the Jacobi bracket `Λ(dF,dH) + F Z(H) − H Z(F)`.
#[derive(Debug, Clone)]
pub struct Bracket {
    eta: MultiVector,
    companion: Option<MultiVector>,
}

impl Bracket {
    pub fn new(eta: MultiVector, companion: Option<MultiVector>) -> Self {
        let companion = companion.filter(|e| !e.is_zero());
        Bracket { eta, companion }
    }

    pub fn arity(&self) -> usize {
        self.eta.order()
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    pub fn eval(&self, fs: &[Expr]) -> Result<Expr, StructureError> {
        if fs.len() != self.arity() {
            return Err(StructureError::Arity { expected: self.arity(), got: fs.len() });
        }
        let forms: Vec<Form> = fs.iter().map(|f| Form::differential(self.dim(), f)).collect();
        let mut acc = self.eta.apply(&forms);
        if let Some(e) = &self.companion {
            for i in 0..fs.len() {
                if fs[i].is_zero() {
                    continue;
                }
                let rest: Vec<Form> = forms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
                let term = fs[i].mul(&e.apply(&rest));
                // i is zero based: (−1)^{(i+1)+1}
                acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
        }
        Ok(acc)
    }
}

/// Bracket evaluator of a candidate.
pub fn make_bracket(c: &Candidate) -> Bracket {
    Bracket::new(c.eta().clone(), c.companion().cloned())
}

/// Fundamental identity residual for `fs = (F₁,…,F_{k−1}, G₁,…,G_k)`:
/// `Σⱼ {G₁,…,{F₁,…,F_{k−1},Gⱼ},…,G_k} − {F₁,…,F_{k−1},{G₁,…,G_k}}`.
pub fn fundamental_identity_residual(b: &Bracket, fs: &[Expr]) -> Result<Expr, StructureError> {
    let k = b.arity();
    if fs.len() != 2 * k - 1 {
        return Err(StructureError::Arity { expected: 2 * k - 1, got: fs.len() });
    }
    let (f, g) = fs.split_at(k - 1);
    let mut lhs = Expr::zero();
    for j in 0..k {
        let mut inner_args = f.to_vec();
        inner_args.push(g[j].clone());
        let inner = b.eval(&inner_args)?;
        let mut outer = g.to_vec();
        outer[j] = inner;
        lhs = lhs.add(&b.eval(&outer)?);
    }
    let mut rhs_args = f.to_vec();
    rhs_args.push(b.eval(g)?);
    Ok(lhs.sub(&b.eval(&rhs_args)?))
}

/// First-order operator residual
/// `{H F₁, F₂,…} − H{F₁,…} − {H,F₂,…}F₁ + H F₁ {1,F₂,…}`.
pub fn first_order_residual(b: &Bracket, h: &Expr, fs: &[Expr]) -> Result<Expr, StructureError> {
    if fs.len() != b.arity() {
        return Err(StructureError::Arity { expected: b.arity(), got: fs.len() });
    }
    let with = |first: Expr| -> Result<Expr, StructureError> {
        let mut args = fs.to_vec();
        args[0] = first;
        b.eval(&args)
    };
    let lhs = with(h.mul(&fs[0]))?;
    let rhs = h.mul(&b.eval(fs)?).add(&with(h.clone())?.mul(&fs[0])).sub(&h.mul(&fs[0]).mul(&with(Expr::one())?));
    Ok(lhs.sub(&rhs))
}
