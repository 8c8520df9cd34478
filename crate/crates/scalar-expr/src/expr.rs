//! Canonical representation of scalar fields.
//!
//! An [`Expr`] is a finite sum of terms `c · x^a · exp(u) · Π 1/dⱼ^pⱼ` with an
//! exact rational coefficient `c`, a Laurent monomial `x^a`, at most one
//! exponential factor and a sorted list of non-monomial denominators. Every
//! constructor keeps this form canonical, so structurally equal expressions
//! are equal functions and an empty sum is the zero function.

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::Q;

/// Failure while building an expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("division by the zero expression")]
    DivisionByZero,
}

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite value")]
    NonFinite,
    #[error("point has dimension {got}, expression needs coordinate {needed}")]
    Dimension { needed: usize, got: usize },
}

/// Exact rational coefficient with a cached `f64` image for evaluation.
#[derive(Clone, Debug)]
pub(crate) struct Coeff {
    pub(crate) q: Q,
    pub(crate) f: f64,
}

impl Coeff {
    fn new(q: Q) -> Self {
        let f = q.to_f64();
        Coeff { q, f }
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Coeff {}
impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q.cmp(&other.q)
    }
}

/// Non-coefficient part of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Key {
    /// Sorted `(variable, power)` pairs, powers nonzero.
    pub(crate) mono: Vec<(usize, i32)>,
    /// Argument of the exponential factor; never the zero expression.
    pub(crate) exp: Option<Expr>,
    /// Sorted `(denominator, power)` pairs; denominators have at least two terms
    /// and are normalized so that their leading coefficient is one.
    pub(crate) recips: Vec<(Expr, u32)>,
}

impl Key {
    fn is_unit(&self) -> bool {
        self.mono.is_empty() && self.exp.is_none() && self.recips.is_empty()
    }
}

/// Symbolic scalar field, immutable and cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Expr(pub(crate) Arc<BTreeMap<Key, Coeff>>);

fn merge_mono(a: &[(usize, i32)], b: &[(usize, i32)]) -> Vec<(usize, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            let p = a[i].1 + b[j].1;
            if p != 0 {
                out.push((a[i].0, p));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn merge_recips(a: &[(Expr, u32)], b: &[(Expr, u32)]) -> Vec<(Expr, u32)> {
    let mut map: BTreeMap<Expr, u32> = a.iter().cloned().collect();
    for (d, p) in b {
        *map.entry(d.clone()).or_insert(0) += p;
    }
    map.into_iter().collect()
}

fn mul_keys(a: &Key, b: &Key) -> Key {
    let exp = match (&a.exp, &b.exp) {
        (None, None) => None,
        (Some(u), None) | (None, Some(u)) => Some(u.clone()),
        (Some(u), Some(v)) => {
            let s = u.add(v);
            if s.is_zero() {
                None
            } else {
                Some(s)
            }
        }
    };
    let recips = if a.recips.is_empty() {
        b.recips.clone()
    } else if b.recips.is_empty() {
        a.recips.clone()
    } else {
        merge_recips(&a.recips, &b.recips)
    };
    Key { mono: merge_mono(&a.mono, &b.mono), exp, recips }
}

fn accumulate(map: &mut BTreeMap<Key, Coeff>, key: Key, q: Q) {
    if q.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(c) => {
            let s = c.q.add(&q);
            if s.is_zero() {
                map.remove(&key);
            } else {
                *c = Coeff::new(s);
            }
        }
        None => {
            map.insert(key, Coeff::new(q));
        }
    }
}

impl Expr {
    fn from_map(map: BTreeMap<Key, Coeff>) -> Self {
        Expr(Arc::new(map))
    }

    fn term(key: Key, q: Q) -> Self {
        let mut map = BTreeMap::new();
        if !q.is_zero() {
            map.insert(key, Coeff::new(q));
        }
        Expr::from_map(map)
    }

    pub fn zero() -> Self {
        Expr::from_map(BTreeMap::new())
    }

    pub fn one() -> Self {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Self {
        Expr::term(Key::default(), Q::int(n))
    }

    /// The rational constant `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Expr::term(Key::default(), Q::int(p).mul(&Q::int(q).recip()))
    }

    pub fn rational(q: BigRational) -> Self {
        Expr::term(Key::default(), Q::from_big(q))
    }

    /// The coordinate function `x_i` (zero based).
    pub fn var(i: usize) -> Self {
        Expr::term(Key { mono: vec![(i, 1)], ..Key::default() }, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The value of a constant expression.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (k, c) = self.0.iter().next().unwrap();
                k.is_unit().then(|| c.q.to_big())
            }
            _ => None,
        }
    }

    fn constant_q(&self) -> Option<Q> {
        match self.0.len() {
            1 => {
                let (k, c) = self.0.iter().next().unwrap();
                k.is_unit().then(|| c.q.clone())
            }
            _ => None,
        }
    }

    /// Number of terms in the canonical sum.
    pub fn term_count(&self) -> usize {
        self.0.len()
    }

    /// True when some term carries a non-monomial denominator.
    pub fn has_quotient(&self) -> bool {
        self.0.keys().any(|k| {
            !k.recips.is_empty() || k.exp.as_ref().is_some_and(|u| u.has_quotient())
        })
    }

    /// True when the expression is a Laurent polynomial without exponentials.
    pub fn is_polynomial(&self) -> bool {
        self.0.keys().all(|k| k.exp.is_none() && k.recips.is_empty())
    }

    /// Largest coordinate index used anywhere in the expression.
    pub fn max_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for k in self.0.keys() {
            let mut consider = |v: Option<usize>| {
                if let Some(v) = v {
                    best = Some(best.map_or(v, |b| b.max(v)));
                }
            };
            consider(k.mono.last().map(|m| m.0));
            consider(k.exp.as_ref().and_then(|u| u.max_var()));
            for (d, _) in &k.recips {
                consider(d.max_var());
            }
        }
        best
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (big, small) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut map = (*big.0).clone();
        for (k, c) in small.0.iter() {
            accumulate(&mut map, k.clone(), c.q.clone());
        }
        Expr::from_map(map)
    }

    pub fn neg(&self) -> Expr {
        let map = self
            .0
            .iter()
            .map(|(k, c)| (k.clone(), Coeff::new(c.q.neg())))
            .collect();
        Expr::from_map(map)
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Expr {
        self.scale_q(&Q::from_big(q.clone()))
    }

    pub(crate) fn scale_q(&self, q: &Q) -> Expr {
        if q.is_zero() {
            return Expr::zero();
        }
        if q.is_one() {
            return self.clone();
        }
        let map = self
            .0
            .iter()
            .map(|(k, c)| (k.clone(), Coeff::new(c.q.mul(q))))
            .collect();
        Expr::from_map(map)
    }

    pub fn scale_int(&self, n: i64) -> Expr {
        self.scale_q(&Q::int(n))
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if let Some(q) = self.constant_q() {
            return other.scale_q(&q);
        }
        if let Some(q) = other.constant_q() {
            return self.scale_q(&q);
        }
        let mut map = BTreeMap::new();
        for (ka, ca) in self.0.iter() {
            for (kb, cb) in other.0.iter() {
                accumulate(&mut map, mul_keys(ka, kb), ca.q.mul(&cb.q));
            }
        }
        Expr::from_map(map)
    }

    pub fn powi(&self, mut n: u32) -> Expr {
        let mut base = self.clone();
        let mut acc = Expr::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `exp(self)`; exponentials of sums are kept as a single factor.
    pub fn exp(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::term(Key { exp: Some(self.clone()), ..Key::default() }, Q::one())
    }

    /// `1/self`. Single-term denominators are inverted exactly.
    pub fn recip(&self) -> Result<Expr, ExprError> {
        match self.0.len() {
            0 => Err(ExprError::DivisionByZero),
            1 => {
                let (k, c) = self.0.iter().next().unwrap();
                let key = Key {
                    mono: k.mono.iter().map(|&(v, p)| (v, -p)).collect(),
                    exp: k.exp.as_ref().map(|u| u.neg()),
                    recips: Vec::new(),
                };
                let mut out = Expr::term(key, c.q.recip());
                for (d, p) in &k.recips {
                    out = out.mul(&d.powi(*p));
                }
                Ok(out)
            }
            _ => {
                let lead = self.0.values().next().unwrap().q.clone();
                let monic = self.scale_q(&lead.recip());
                Ok(Expr::term(Key { recips: vec![(monic, 1)], ..Key::default() }, lead.recip()))
            }
        }
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr, ExprError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Partial derivative with respect to coordinate `i`.
    pub fn diff(&self, i: usize) -> Expr {
        let mut map: BTreeMap<Key, Coeff> = BTreeMap::new();
        let mut extra = Expr::zero();
        for (k, c) in self.0.iter() {
            if let Some(pos) = k.mono.iter().position(|m| m.0 == i) {
                let p = k.mono[pos].1;
                let mut key = k.clone();
                if p == 1 {
                    key.mono.remove(pos);
                } else {
                    key.mono[pos].1 = p - 1;
                }
                accumulate(&mut map, key, c.q.mul(&Q::int(p as i64)));
            }
            if let Some(u) = &k.exp {
                let du = u.diff(i);
                if !du.is_zero() {
                    extra = extra.add(&Expr::term(k.clone(), c.q.clone()).mul(&du));
                }
            }
            for (j, (d, p)) in k.recips.iter().enumerate() {
                let dd = d.diff(i);
                if dd.is_zero() {
                    continue;
                }
                let mut key = k.clone();
                key.recips[j].1 = p + 1;
                let q = c.q.mul(&Q::int(-(*p as i64)));
                extra = extra.add(&Expr::term(key, q).mul(&dd));
            }
        }
        Expr::from_map(map).add(&extra)
    }

    /// Evaluate at a point; coordinates are indexed from zero.
    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut sum = 0.0;
        for (k, c) in self.0.iter() {
            let mut t = c.f;
            for &(v, p) in &k.mono {
                let xv = *x.get(v).ok_or(EvalError::Dimension { needed: v, got: x.len() })?;
                if p < 0 && xv == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                t *= xv.powi(p);
            }
            if let Some(u) = &k.exp {
                t *= u.eval(x)?.exp();
            }
            for (d, p) in &k.recips {
                let dv = d.eval(x)?;
                if dv == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                t /= dv.powi(*p as i32);
            }
            sum += t;
        }
        if sum.is_finite() {
            Ok(sum)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Render with the given coordinate names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> Display<'a> {
        Display { expr: self, names: Some(names) }
    }

    /// Render as text that [`crate::parse`] accepts over the same names.
    pub fn to_text(&self, names: &[String]) -> String {
        self.display(names).to_string()
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                Expr::$m(self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                Expr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                Expr::$m(&self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                Expr::$m(self, &rhs)
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}
impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

/// Display adapter; without names, coordinates print as `x1, x2, …`.
pub struct Display<'a> {
    expr: &'a Expr,
    names: Option<&'a [String]>,
}

impl Display<'_> {
    fn var(&self, f: &mut fmt::Formatter<'_>, v: usize) -> fmt::Result {
        match self.names.and_then(|n| n.get(v)) {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "x{}", v + 1),
        }
    }

    fn sub<'b>(&'b self, e: &'b Expr) -> Display<'b> {
        Display { expr: e, names: self.names }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, p: u32) -> fmt::Result {
    if p != 1 {
        write!(f, "^{p}")?;
    }
    Ok(())
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_zero() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.expr.0.iter().enumerate() {
            let negative = c.q.is_negative();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.q.abs();
            let numer_factors = k.mono.iter().filter(|m| m.1 > 0).count() + k.exp.is_some() as usize;
            let mut first = true;
            if !mag.is_one() || numer_factors == 0 {
                write!(f, "{mag}")?;
                first = false;
            }
            for &(v, p) in k.mono.iter().filter(|m| m.1 > 0) {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                self.var(f, v)?;
                write_power(f, p as u32)?;
            }
            if let Some(u) = &k.exp {
                if !first {
                    write!(f, "*")?;
                }
                write!(f, "exp({})", self.sub(u))?;
            }
            for &(v, p) in k.mono.iter().filter(|m| m.1 < 0) {
                write!(f, "/")?;
                self.var(f, v)?;
                write_power(f, (-p) as u32)?;
            }
            for (d, p) in &k.recips {
                write!(f, "/({})", self.sub(d))?;
                write_power(f, *p)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Display { expr: self, names: None }, f)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
