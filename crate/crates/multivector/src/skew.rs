//! Skew-symmetric coefficient arrays shared by multivector fields and forms.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use scalar_expr::{check_pairs, parse, Expr, ParseError, SampleBox, SampleError, Verdict};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MvError {
    #[error("chart mismatch: dimension {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("cannot contract a {form}-form into a {field}-vector")]
    ContractionOrder { form: usize, field: usize },
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("index {0} out of range")]
    IndexRange(usize),
    #[error("unknown coordinate {0:?}")]
    UnknownCoordinate(String),
    #[error("repeated coordinate in {0:?}")]
    RepeatedIndex(String),
    #[error("expression {key:?}: {source}")]
    Expr { key: String, source: ParseError },
}

/// Marker for contravariant (multivector) components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vector;
/// Marker for covariant (differential form) components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Covector;

/// Order-`order` skew tensor on an `dim`-dimensional chart, stored by
/// strictly increasing index tuples; missing tuples are zero.
pub struct Skew<K> {
    dim: usize,
    order: usize,
    map: BTreeMap<Vec<usize>, Expr>,
    _kind: PhantomData<K>,
}

impl<K> Clone for Skew<K> {
    fn clone(&self) -> Self {
        Skew { dim: self.dim, order: self.order, map: self.map.clone(), _kind: PhantomData }
    }
}

/// Structural equality; zero tensors of different order compare equal.
impl<K> PartialEq for Skew<K> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.map == other.map
            && (self.order == other.order || self.map.is_empty())
    }
}
impl<K> Eq for Skew<K> {}

pub type MultiVector = Skew<Vector>;
pub type Form = Skew<Covector>;

/// Sort `idx` in place and return the permutation sign, or `None` on repeats.
pub(crate) fn sort_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Sign of the shuffle merging two sorted disjoint tuples, with the merged tuple.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining elements of a
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, if inversions % 2 == 0 { 1 } else { -1 }))
}

impl<K> Skew<K> {
    pub fn zero(dim: usize, order: usize) -> Self {
        Skew { dim, order, map: BTreeMap::new(), _kind: PhantomData }
    }

    /// Order-zero element holding a scalar.
    pub fn scalar(dim: usize, e: Expr) -> Self {
        let mut s = Skew::zero(dim, 0);
        s.insert_sorted(Vec::new(), e);
        s
    }

    /// Basis element `∂_{i₁}∧…` (or `dx_{i₁}∧…`) with coefficient `c`;
    /// indices in any order.
    pub fn monomial(dim: usize, idx: &[usize], c: Expr) -> Self {
        Skew::from_terms(dim, idx.len(), [(idx.to_vec(), c)]).expect("valid basis indices")
    }

    /// Build from possibly unsorted index tuples; repeated indices contribute zero.
    pub fn from_terms(
        dim: usize,
        order: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Expr)>,
    ) -> Result<Self, MvError> {
        let mut s = Skew::zero(dim, order);
        for (mut idx, c) in terms {
            if idx.len() != order {
                return Err(MvError::OrderMismatch { expected: order, got: idx.len() });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(MvError::IndexRange(bad));
            }
            if let Some(sign) = sort_sign(&mut idx) {
                s.accumulate(idx, c.scale_int(sign));
            }
        }
        Ok(s)
    }

    pub(crate) fn insert_sorted(&mut self, idx: Vec<usize>, c: Expr) {
        if !c.is_zero() {
            self.map.insert(idx, c);
        }
    }

    pub(crate) fn accumulate(&mut self, idx: Vec<usize>, c: Expr) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&idx) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.map.remove(&idx);
                } else {
                    *old = s;
                }
            }
            None => {
                self.map.insert(idx, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Stored components in increasing tuple order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.map.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Component at an arbitrary index tuple, with skew sign bookkeeping.
    pub fn get(&self, idx: &[usize]) -> Expr {
        let mut sorted = idx.to_vec();
        match sort_sign(&mut sorted) {
            None => Expr::zero(),
            Some(sign) => self.map.get(&sorted).map_or_else(Expr::zero, |c| c.scale_int(sign)),
        }
    }

    /// The scalar held by an order-zero element.
    pub fn as_scalar(&self) -> Option<Expr> {
        (self.order == 0).then(|| self.get(&[]))
    }

    pub fn check_same_chart<L>(&self, other: &Skew<L>) -> Result<(), MvError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(MvError::DimMismatch(self.dim, other.dim))
        }
    }

    fn assert_same_chart<L>(&self, other: &Skew<L>) {
        if let Err(e) = self.check_same_chart(other) {
            panic!("{e}");
        }
    }

    /// Apply `f` to every coefficient, pruning zeros.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Expr) -> Expr) -> Self {
        let mut out = Skew::zero(self.dim, self.order);
        for (k, c) in &self.map {
            out.insert_sorted(k.clone(), f(c));
        }
        out
    }

    /// Partial derivative of every coefficient along coordinate `k`.
    pub fn diff_coeffs(&self, k: usize) -> Self {
        self.map_coeffs(|c| c.diff(k))
    }

    pub fn scale(&self, f: &Expr) -> Self {
        if f.is_zero() {
            return Skew::zero(self.dim, self.order);
        }
        self.map_coeffs(|c| c.mul(f))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.map_coeffs(|c| c.scale_int(n))
    }

    pub fn neg(&self) -> Self {
        self.scale_int(-1)
    }

    /// Sum. Panics if charts or orders differ, except that a zero element of
    /// any order is absorbed.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_chart(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.order, other.order, "adding skew tensors of different order");
        let mut out = self.clone();
        for (k, c) in &other.map {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exterior product. Panics if charts differ.
    pub fn wedge(&self, other: &Self) -> Self {
        self.assert_same_chart(other);
        let mut out = Skew::zero(self.dim, self.order + other.order);
        for (a, ca) in &self.map {
            for (b, cb) in &other.map {
                if let Some((idx, sign)) = merge_sign(a, b) {
                    out.accumulate(idx, ca.mul(cb).scale_int(sign));
                }
            }
        }
        out
    }

    /// Compare componentwise on a sample box.
    pub fn check_equal(&self, other: &Self, bx: &SampleBox) -> Result<Verdict, SampleError> {
        let mut keys: Vec<&Vec<usize>> = self.map.keys().chain(other.map.keys()).collect();
        keys.sort();
        keys.dedup();
        let pairs: Vec<(Expr, Expr)> = keys
            .into_iter()
            .map(|k| (self.get(k), other.get(k)))
            .collect();
        check_pairs(&pairs, bx)
    }

    /// Decide whether every component vanishes on a sample box.
    pub fn check_zero(&self, bx: &SampleBox) -> Result<Verdict, SampleError> {
        let zero = Skew::zero(self.dim, self.order);
        self.check_equal(&zero, bx)
    }

    /// Parse a component map `{"x,y": "expr"}` over the given coordinates.
    pub fn from_text<'a>(
        coords: &[String],
        order: usize,
        entries: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, MvError> {
        let mut s = Skew::zero(coords.len(), order);
        for (key, text) in entries {
            let mut idx = Vec::new();
            if !key.trim().is_empty() {
                for name in key.split(',') {
                    let name = name.trim();
                    let i = coords
                        .iter()
                        .position(|c| c == name)
                        .ok_or_else(|| MvError::UnknownCoordinate(name.to_string()))?;
                    idx.push(i);
                }
            }
            if idx.len() != order {
                return Err(MvError::OrderMismatch { expected: order, got: idx.len() });
            }
            let sign = sort_sign(&mut idx).ok_or_else(|| MvError::RepeatedIndex(key.to_string()))?;
            let e = parse(text, coords).map_err(|source| MvError::Expr { key: key.to_string(), source })?;
            s.accumulate(idx, e.scale_int(sign));
        }
        Ok(s)
    }

    /// Component map keyed by comma-joined coordinate names.
    pub fn to_text(&self, coords: &[String]) -> BTreeMap<String, String> {
        self.map
            .iter()
            .map(|(k, c)| {
                let key = k.iter().map(|&i| coords[i].as_str()).collect::<Vec<_>>().join(",");
                (key, c.to_text(coords))
            })
            .collect()
    }

    /// Re-tag the components as the other variance.
    pub(crate) fn cast<L>(self) -> Skew<L> {
        Skew { dim: self.dim, order: self.order, map: self.map, _kind: PhantomData }
    }

    /// Embed into a chart with more coordinates (new coordinates appended).
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim, "cannot embed into a smaller chart");
        Skew { dim, order: self.order, map: self.map.clone(), _kind: PhantomData }
    }
}

impl<K> fmt::Debug for Skew<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.map.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.map.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let idx: Vec<String> = k.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({c})[{}]", idx.join(","))?;
        }
        Ok(())
    }
}
