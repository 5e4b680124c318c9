//! Dense matrices over an exact field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{Coeff, RatFunc};
use crate::Rational;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn inv(&self) -> Option<Self>;
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl<C: Coeff> Field for RatFunc<C> {
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self).ok()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn from_fn<G: FnMut(usize, usize) -> F>(rows: usize, cols: usize, mut g: G) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<G: Fn(&F) -> F>(&self, g: G) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        (0..self.rows).all(|i| self[(i, i)].is_one() && (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let p = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() * p.clone();
                inv[(col, j)] = inv[(col, j)].clone() * p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    }
                    if !inv[(col, j)].is_zero() {
                        inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(piv) = (rank..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(piv, rank);
            let p = a[(rank, col)].inv().expect("nonzero pivot");
            for r in rank + 1..a.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() * p.clone();
                for j in col..a.cols {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(rank, j)].clone();
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, F: Field> Mul<&'a Matrix<F>> for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

/// Outcome of [`SparseSystem::solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum SparseSolution<C> {
    Unique(Vec<C>),
    Inconsistent,
    /// Index of an unknown left free.
    Free(usize),
}

/// Linear system over an exact field, kept in row echelon form as equations
/// arrive. Each stored row starts with a 1 at its pivot column.
#[derive(Clone, Debug)]
pub struct SparseSystem<C> {
    unknowns: usize,
    pivots: BTreeMap<usize, (BTreeMap<usize, C>, C)>,
    inconsistent: bool,
}

impl<C: Coeff> SparseSystem<C> {
    pub fn new(unknowns: usize) -> Self {
        SparseSystem { unknowns, pivots: BTreeMap::new(), inconsistent: false }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `sum row[j] x_j = rhs`.
    pub fn add_equation(&mut self, mut row: BTreeMap<usize, C>, mut rhs: C) {
        row.retain(|_, c| !c.is_zero());
        loop {
            let Some((&col, lead)) = row.iter().next() else {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
                return;
            };
            assert!(col < self.unknowns, "unknown {col} out of range");
            let lead = lead.clone();
            match self.pivots.get(&col) {
                Some((prow, prhs)) => {
                    for (j, c) in prow {
                        let v = row.remove(j).unwrap_or_else(C::zero) - lead.clone() * c.clone();
                        if !v.is_zero() {
                            row.insert(*j, v);
                        }
                    }
                    rhs = rhs - lead * prhs.clone();
                }
                None => {
                    let inv = C::one() / lead;
                    for c in row.values_mut() {
                        *c = c.clone() * inv.clone();
                    }
                    self.pivots.insert(col, (row, rhs * inv));
                    return;
                }
            }
        }
    }

    pub fn solve(&self) -> SparseSolution<C> {
        if self.inconsistent {
            return SparseSolution::Inconsistent;
        }
        if let Some(free) = (0..self.unknowns).find(|j| !self.pivots.contains_key(j)) {
            return SparseSolution::Free(free);
        }
        let mut x = vec![C::zero(); self.unknowns];
        for (&col, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (j, c) in row.range(col + 1..) {
                v = v - c.clone() * x[*j].clone();
            }
            x[col] = v;
        }
        SparseSolution::Unique(x)
    }
}
