//! Budgeted black-box access to a function on the cube.
//!
//! Every algorithm in the crate samples through a [`CountingOracle`], which
//! rejects points outside `[-1, 1]^d`, enforces the budget and keeps the full
//! query ledger so runs can be replayed and compared bit-for-bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ridge::RidgeFunction;

/// A function on `[-1, 1]^d`. `value` is only called on validated points.
pub trait Target: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
}

impl Target for RidgeFunction {
    fn dim(&self) -> usize {
        RidgeFunction::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.value_at(x)
    }
}

/// Adapts a closure into a [`Target`].
pub struct FnTarget<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnTarget<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Target for FnTarget<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// The zero function in dimension `d`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroTarget(pub usize);

impl Target for ZeroTarget {
    fn dim(&self) -> usize {
        self.0
    }

    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("budget of {budget} samples exhausted")]
    BudgetExhausted { budget: usize },
    #[error("query coordinate {index} = {value} lies outside [-1, 1]")]
    DomainViolation { index: usize, value: f64 },
    #[error("query has dimension {got}, oracle expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub point: Vec<f64>,
    pub value: f64,
}

pub struct CountingOracle<'a> {
    target: &'a dyn Target,
    budget: Option<usize>,
    ledger: Vec<Query>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(target: &'a dyn Target, budget: usize) -> Self {
        Self { target, budget: Some(budget), ledger: Vec::new() }
    }

    pub fn unlimited(target: &'a dyn Target) -> Self {
        Self { target, budget: None, ledger: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn samples_used(&self) -> usize {
        self.ledger.len()
    }

    pub fn remaining(&self) -> Option<usize> {
        self.budget.map(|b| b - self.ledger.len())
    }

    pub fn ledger(&self) -> &[Query] {
        &self.ledger
    }

    pub fn into_ledger(self) -> Vec<Query> {
        self.ledger
    }

    pub fn query(&mut self, x: &[f64]) -> Result<f64, OracleError> {
        let expected = self.target.dim();
        if x.len() != expected {
            return Err(OracleError::DimensionMismatch { expected, got: x.len() });
        }
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(v.abs() <= 1.0)) {
            return Err(OracleError::DomainViolation { index, value });
        }
        if let Some(budget) = self.budget {
            if self.ledger.len() >= budget {
                return Err(OracleError::BudgetExhausted { budget });
            }
        }
        let value = self.target.value(x);
        self.ledger.push(Query { point: x.to_vec(), value });
        Ok(value)
    }

    /// Re-evaluates every ledger point and compares bit patterns.
    pub fn replay_matches(&self) -> bool {
        self.ledger.iter().all(|q| self.target.value(&q.point).to_bits() == q.value.to_bits())
    }
}

/// Ledgers agree when every point coincides bit-for-bit.
pub fn same_points(a: &[Query], b: &[Query]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.point.len() == y.point.len()
                && x.point.iter().zip(&y.point).all(|(u, v)| u.to_bits() == v.to_bits())
        })
}
