//! Finite families of test functions standing in for "all smooth functions".

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalar_expr::random::{monomial, monomial_exponents, random_polynomial};
use scalar_expr::Expr;

use crate::candidate::StructureError;

/// Test functions plus the seed used for every random choice made from them.
#[derive(Debug, Clone)]
pub struct FunctionFamily {
    functions: Vec<Expr>,
    /// Index where the seeded random members start.
    random_start: usize,
    seed: u64,
}

impl FunctionFamily {
    pub const DEFAULT_RANDOM: usize = 8;
    pub const DEFAULT_DEGREE: u32 = 2;

    /// Coordinates, every monomial of degree `<= 2`, and `random` seeded dense
    /// quadratic polynomials with coefficients in `-3..=3`.
    pub fn standard(dim: usize, random: usize, seed: u64) -> Self {
        let mut functions: Vec<Expr> = (0..dim).map(Expr::var).collect();
        for e in monomial_exponents(dim, Self::DEFAULT_DEGREE) {
            let m = monomial(&e);
            if !functions.contains(&m) {
                functions.push(m);
            }
        }
        let random_start = functions.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random {
            functions.push(random_polynomial(dim, Self::DEFAULT_DEGREE, 3, &mut rng));
        }
        FunctionFamily { functions, random_start, seed }
    }

    pub fn with_default(dim: usize, seed: u64) -> Self {
        Self::standard(dim, Self::DEFAULT_RANDOM, seed)
    }

    pub fn from_functions(functions: Vec<Expr>, seed: u64) -> Result<Self, StructureError> {
        if functions.is_empty() {
            return Err(StructureError::EmptyFamily);
        }
        Ok(FunctionFamily { random_start: functions.len(), functions, seed })
    }

    pub fn functions(&self) -> &[Expr] {
        &self.functions
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Non-constant members, the only ones that matter as contraction fixers.
    pub fn nonconstant(&self) -> Vec<&Expr> {
        self.functions.iter().filter(|f| f.as_constant().is_none()).collect()
    }

    /// Up to `cap` tuples of `size` distinct non-constant members: every
    /// tuple when there are few enough, otherwise a seeded selection that
    /// always starts with the coordinate tuples.
    pub fn tuples(&self, size: usize, cap: usize, salt: u64) -> Vec<Vec<Expr>> {
        let pool = self.nonconstant();
        if size == 0 {
            return vec![Vec::new()];
        }
        if pool.len() < size {
            return Vec::new();
        }
        let mut all = Vec::new();
        let mut idx: Vec<usize> = (0..size).collect();
        let total = binomial(pool.len(), size);
        if total <= cap {
            loop {
                all.push(idx.iter().map(|&i| pool[i].clone()).collect());
                let mut i = size;
                while i > 0 && idx[i - 1] == pool.len() - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            return all;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let coords: Vec<&Expr> = pool.iter().copied().filter(|f| is_coordinate(f)).collect();
        if coords.len() >= size {
            all.push(coords[..size].iter().map(|f| (*f).clone()).collect());
        }
        while all.len() < cap {
            let pick: Vec<Expr> = pool.choose_multiple(&mut rng, size).map(|f| (*f).clone()).collect();
            all.push(pick);
        }
        all
    }

    /// `count` seeded tuples of `size` members drawn with replacement. The
    /// dense random members are used when present, since sparse monomials
    /// often make nested brackets degenerate.
    pub fn draws(&self, size: usize, count: usize, salt: u64) -> Vec<Vec<Expr>> {
        let random: Vec<&Expr> = self.functions[self.random_start..].iter().filter(|f| f.as_constant().is_none()).collect();
        let pool = if random.len() >= 2 { random } else { self.nonconstant() };
        if pool.is_empty() {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03));
        (0..count)
            .map(|_| (0..size).map(|_| (*pool.choose(&mut rng).unwrap()).clone()).collect())
            .collect()
    }
}

fn is_coordinate(f: &Expr) -> bool {
    f.term_count() == 1 && f.max_var().is_some_and(|v| *f == Expr::var(v))
}

fn binomial(n: usize, k: usize) -> usize {
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}
