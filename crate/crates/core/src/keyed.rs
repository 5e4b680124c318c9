//! Square matrices indexed by the partitions of one degree.

use std::collections::HashMap;

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::combin::Partition;
use crate::exact::{parse_ratfunc, Coeff, ExactError, RatFunc};
use crate::linalg::Matrix;

/// Entry `(lambda, mu)` is the coefficient of the `mu`-th basis vector in the
/// `lambda`-th element, so column `lambda` of the dense matrix expands
/// element `lambda`. Serialized under the key `"[lambda]|[mu]"`.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyedMatrix<C: Coeff> {
    order: Vec<Partition>,
    index: HashMap<Partition, usize>,
    matrix: Matrix<RatFunc<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeyError {
    #[error("malformed entry key {0:?}")]
    BadKey(String),
    #[error("{0} is not in the index set")]
    Unknown(Partition),
    #[error("expected a JSON object of entries")]
    NotObject,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub fn pair_key(lambda: &Partition, mu: &Partition) -> String {
    format!("{lambda}|{mu}")
}

pub fn parse_pair_key(key: &str) -> Result<(Partition, Partition), KeyError> {
    let bad = || KeyError::BadKey(key.to_string());
    let (a, b) = key.split_once('|').ok_or_else(bad)?;
    let a: Partition = serde_json::from_str(a).map_err(|_| bad())?;
    let b: Partition = serde_json::from_str(b).map_err(|_| bad())?;
    Ok((a, b))
}

impl<C: Coeff> KeyedMatrix<C> {
    pub fn from_matrix(order: Vec<Partition>, matrix: Matrix<RatFunc<C>>) -> Self {
        assert_eq!(matrix.rows(), order.len());
        assert_eq!(matrix.cols(), order.len());
        let index = order.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        KeyedMatrix { order, index, matrix }
    }

    pub fn identity(order: Vec<Partition>) -> Self {
        let n = order.len();
        Self::from_matrix(order, Matrix::identity(n))
    }

    pub fn order(&self) -> &[Partition] {
        &self.order
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn matrix(&self) -> &Matrix<RatFunc<C>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<RatFunc<C>> {
        self.matrix
    }

    /// Entry `(lambda, mu)`; zero if either is outside the index set.
    pub fn get(&self, lambda: &Partition, mu: &Partition) -> RatFunc<C> {
        match (self.index.get(lambda), self.index.get(mu)) {
            (Some(&j), Some(&i)) => self.matrix[(i, j)].clone(),
            _ => RatFunc::zero(),
        }
    }

    pub fn set(&mut self, lambda: &Partition, mu: &Partition, v: RatFunc<C>) {
        let j = self.index[lambda];
        let i = self.index[mu];
        self.matrix[(i, j)] = v;
    }

    /// Nonzero entries in order of `(lambda, mu)` positions.
    pub fn entries(&self) -> impl Iterator<Item = (&Partition, &Partition, &RatFunc<C>)> + '_ {
        let n = self.order.len();
        (0..n).flat_map(move |j| {
            (0..n).filter_map(move |i| {
                let v = &self.matrix[(i, j)];
                (!v.is_zero()).then(|| (&self.order[j], &self.order[i], v))
            })
        })
    }

    pub fn entries_json(&self) -> Value {
        let map: Map<String, Value> =
            self.entries().map(|(l, m, v)| (pair_key(l, m), Value::String(v.to_string()))).collect();
        Value::Object(map)
    }

    pub fn from_entries_json(order: Vec<Partition>, v: &Value) -> Result<Self, KeyError> {
        let obj = v.as_object().ok_or(KeyError::NotObject)?;
        let mut out = Self::from_matrix(order.clone(), Matrix::zeros(order.len(), order.len()));
        for (k, s) in obj {
            let (lambda, mu) = parse_pair_key(k)?;
            for p in [&lambda, &mu] {
                if !out.index.contains_key(p) {
                    return Err(KeyError::Unknown(p.clone()));
                }
            }
            let s = s.as_str().ok_or_else(|| KeyError::BadKey(k.clone()))?;
            out.set(&lambda, &mu, parse_ratfunc(s)?);
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&RatFunc<C>) -> RatFunc<C>) -> Self {
        Self::from_matrix(self.order.clone(), self.matrix.map(f))
    }
}

pub(crate) fn order_json(order: &[Partition]) -> Value {
    Value::Array(order.iter().map(|p| serde_json::to_value(p).expect("partition")).collect())
}

pub(crate) fn order_from_json(v: &Value) -> Option<Vec<Partition>> {
    serde_json::from_value(v.clone()).ok()
}
