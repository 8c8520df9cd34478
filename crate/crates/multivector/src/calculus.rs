//! Contraction, Schouten–Nijenhuis bracket and the exterior differentials.

use scalar_expr::{check_zero, Expr, SampleBox};

use crate::skew::{Form, MultiVector, MvError};

impl Form {
    /// `dF = Σ ∂F/∂xᵢ dxᵢ`.
    pub fn differential(dim: usize, f: &Expr) -> Form {
        Form::from_terms(dim, 1, (0..dim).map(|i| (vec![i], f.diff(i)))).unwrap()
    }

    /// Constant basis one-form `dx_i`.
    pub fn basis(dim: usize, i: usize) -> Form {
        Form::monomial(dim, &[i], Expr::one())
    }

    /// Coefficient `α_i` of a one-form.
    pub fn component(&self, i: usize) -> Expr {
        debug_assert_eq!(self.order(), 1);
        self.get(&[i])
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.dim(), self.order() + 1);
        for k in 0..self.dim() {
            let dk = self.diff_coeffs(k);
            if !dk.is_zero() {
                out = out.add(&Form::basis(self.dim(), k).wedge(&dk));
            }
        }
        out
    }

    /// Lichnerowicz–de Rham differential `d_θ α = dα − θ∧α`.
    ///
    /// The closedness of `θ` is checked on `bx`; a failure is reported as a
    /// warning and the formula is still applied.
    pub fn ldr(&self, theta: &Form, bx: &SampleBox) -> Twisted {
        let value = self.d().sub(&theta.wedge(self));
        let dtheta = theta.d();
        let exprs: Vec<Expr> = dtheta.iter().map(|(_, c)| c.clone()).collect();
        let warning = match check_zero(&exprs, bx) {
            Ok(v) if v.is_equal() => None,
            Ok(v) => Some(format!("Lee form is not closed: |dθ| = {:e}", v.max_residual())),
            Err(e) => Some(format!("closedness of the Lee form could not be sampled: {e}")),
        };
        Twisted { value, warning }
    }

    /// `d_θ F = dF − Fθ` for a function.
    pub fn ldr_function(f: &Expr, theta: &Form) -> Form {
        Form::differential(theta.dim(), f).sub(&theta.scale(f))
    }
}

/// Result of a twisted differential with an optional closedness warning.
#[derive(Debug, Clone)]
pub struct Twisted {
    pub value: Form,
    pub warning: Option<String>,
}

impl MultiVector {
    /// Vector field `Σ cᵢ ∂ᵢ`.
    pub fn vector(dim: usize, comps: impl IntoIterator<Item = Expr>) -> MultiVector {
        MultiVector::from_terms(dim, 1, comps.into_iter().enumerate().map(|(i, c)| (vec![i], c))).unwrap()
    }

    /// Component `Xⁱ` of a vector field.
    pub fn component(&self, i: usize) -> Expr {
        debug_assert_eq!(self.order(), 1);
        self.get(&[i])
    }

    /// Derivative of a function along a vector field, `X(F)`.
    pub fn derivative_of(&self, f: &Expr) -> Expr {
        assert_eq!(self.order(), 1, "only vector fields act on functions");
        let mut acc = Expr::zero();
        for (idx, c) in self.iter() {
            acc = acc.add(&c.mul(&f.diff(idx[0])));
        }
        acc
    }

    /// Right contraction with the basis form `dx_k`, inserted in the last slot.
    pub fn contract_basis(&self, k: usize) -> MultiVector {
        let m = self.order();
        if m == 0 {
            return MultiVector::zero(self.dim(), 0);
        }
        let mut out = MultiVector::zero(self.dim(), m - 1);
        for (idx, c) in self.iter() {
            if let Some(pos) = idx.iter().position(|&i| i == k) {
                // pos is zero based; the sign is (−1)^{i+m} with i = pos + 1
                let sign = if (pos + 1 + m) % 2 == 0 { 1 } else { -1 };
                let mut rest = idx.to_vec();
                rest.remove(pos);
                out.accumulate(rest, c.scale_int(sign));
            }
        }
        out
    }

    /// Right contraction `ι_α X`; for `α = α₁∧…∧α_q` this is `ι_{α₁}⋯ι_{α_q}X`.
    /// Panics on chart mismatch or when the form order exceeds the field order.
    pub fn contract(&self, alpha: &Form) -> MultiVector {
        self.check_same_chart(alpha).unwrap();
        let (m, q) = (self.order(), alpha.order());
        assert!(q <= m, "{}", MvError::ContractionOrder { form: q, field: m });
        let mut out = MultiVector::zero(self.dim(), m - q);
        for (idx, a) in alpha.iter() {
            let mut x = self.clone();
            for &k in idx.iter().rev() {
                x = x.contract_basis(k);
                if x.is_zero() {
                    break;
                }
            }
            out = out.add(&x.scale(a));
        }
        out
    }

    /// Contract successively with `α₁ ∧ … ∧ α_q` given as one-forms.
    pub fn contract_all(&self, forms: &[Form]) -> MultiVector {
        let mut x = self.clone();
        for f in forms.iter().rev() {
            x = x.contract(f);
        }
        x
    }

    /// `X(α₁,…,α_m)` for one-forms.
    pub fn apply(&self, forms: &[Form]) -> Expr {
        assert_eq!(forms.len(), self.order(), "{}", MvError::Arity { expected: self.order(), got: forms.len() });
        self.contract_all(forms).as_scalar().unwrap()
    }

    /// Musical sharp `β ↦ ι_β X`.
    pub fn sharp(&self, beta: &Form) -> MultiVector {
        self.contract(beta)
    }

    /// Schouten–Nijenhuis bracket, order `m + n − 1`.
    ///
    /// Coordinate formula
    /// `[X,Y] = Σₖ ι_{dxₖ}X ∧ ∂ₖY + (−1)ⁿ Σₖ ∂ₖX ∧ ι_{dxₖ}Y`
    /// with `∂ₖ` acting on coefficients; it agrees with the decomposable
    /// definition and gives `[X,F] = ι_{dF}X`, `[F,Y] = (−1)ⁿ ι_{dF}Y`.
    pub fn sn_bracket(&self, other: &MultiVector) -> MultiVector {
        self.check_same_chart(other).unwrap();
        let (m, n) = (self.order(), other.order());
        if m + n == 0 {
            return MultiVector::zero(self.dim(), 0);
        }
        let mut out = MultiVector::zero(self.dim(), m + n - 1);
        for k in 0..self.dim() {
            if m >= 1 {
                let ix = self.contract_basis(k);
                if !ix.is_zero() {
                    let dy = other.diff_coeffs(k);
                    if !dy.is_zero() {
                        out = out.add(&ix.wedge(&dy));
                    }
                }
            }
            if n >= 1 {
                let iy = other.contract_basis(k);
                if !iy.is_zero() {
                    let dx = self.diff_coeffs(k);
                    if !dx.is_zero() {
                        let t = dx.wedge(&iy);
                        out = if n % 2 == 0 { out.add(&t) } else { out.sub(&t) };
                    }
                }
            }
        }
        out
    }

    /// Lie derivative `ℒ_V X = [V, X]` along a vector field.
    pub fn lie_derivative(&self, v: &MultiVector) -> MultiVector {
        assert_eq!(v.order(), 1, "Lie derivative needs a vector field");
        v.sn_bracket(self)
    }

    /// View the components as a differential form (used for Lee forms stored
    /// as coefficient arrays).
    pub fn into_form(self) -> Form {
        self.cast()
    }
}

impl Form {
    pub fn into_multivector(self) -> MultiVector {
        self.cast()
    }
}

/// Exterior product with chart checking.
pub fn wedge<K>(x: &crate::Skew<K>, y: &crate::Skew<K>) -> Result<crate::Skew<K>, MvError> {
    x.check_same_chart(y)?;
    Ok(x.wedge(y))
}

/// Right contraction with chart and order checking.
pub fn contract_right(alpha: &Form, x: &MultiVector) -> Result<MultiVector, MvError> {
    x.check_same_chart(alpha)?;
    if alpha.order() > x.order() {
        return Err(MvError::ContractionOrder { form: alpha.order(), field: x.order() });
    }
    Ok(x.contract(alpha))
}

/// Evaluation on one-forms with arity checking.
pub fn apply(x: &MultiVector, forms: &[Form]) -> Result<Expr, MvError> {
    if forms.len() != x.order() {
        return Err(MvError::Arity { expected: x.order(), got: forms.len() });
    }
    for f in forms {
        x.check_same_chart(f)?;
        if f.order() != 1 {
            return Err(MvError::OrderMismatch { expected: 1, got: f.order() });
        }
    }
    Ok(x.apply(forms))
}

/// Schouten–Nijenhuis bracket with chart checking.
pub fn sn_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector, MvError> {
    x.check_same_chart(y)?;
    Ok(x.sn_bracket(y))
}

/// Lie derivative with order checking.
pub fn lie_derivative(v: &MultiVector, x: &MultiVector) -> Result<MultiVector, MvError> {
    v.check_same_chart(x)?;
    if v.order() != 1 {
        return Err(MvError::OrderMismatch { expected: 1, got: v.order() });
    }
    Ok(v.sn_bracket(x))
}
