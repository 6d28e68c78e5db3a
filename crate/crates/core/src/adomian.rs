//! Adomian polynomials for the quadratic nonlinearities `u·u_X`, `v·v_X`
//! and `u·v`, in Cauchy-convolution form:
//!
//! ```text
//! A_n = Σ_{k=0}^{n} u_k ∂_X u_{n−k}      C_n = Σ_{k=0}^{n} u_k v_{n−k}
//! ```

use std::ops::Index;

use crate::error::{Error, Result};
use crate::expr::{Axis, Expression};

/// Series components `u_0, u_1, ...` indexed from zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComponentList {
    items: Vec<Expression>,
}

impl ComponentList {
    pub fn new(first: Expression) -> Self {
        Self { items: vec![first] }
    }

    pub fn from_vec(items: Vec<Expression>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::MissingComponent { index: 0, len: 0 });
        }
        Ok(Self { items })
    }

    pub fn push(&mut self, e: Expression) {
        self.items.push(e);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<&Expression> {
        self.items.get(index).ok_or(Error::MissingComponent {
            index,
            len: self.items.len(),
        })
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Expression> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Expression] {
        &self.items
    }

    fn require(&self, n: usize) -> Result<()> {
        self.get(n).map(|_| ())
    }
}

impl Index<usize> for ComponentList {
    type Output = Expression;
    fn index(&self, index: usize) -> &Expression {
        &self.items[index]
    }
}

fn self_convection(u: &ComponentList, n: usize) -> Result<Expression> {
    u.require(n)?;
    let terms = (0..=n)
        .map(|k| u[k].multiply(&u[n - k].differentiate(Axis::X)))
        .fold(Expression::zero(), |acc, e| acc.add(&e));
    Ok(terms)
}

/// `A_n` for `u·u_X`.
pub fn adomian_a(u: &ComponentList, n: usize) -> Result<Expression> {
    self_convection(u, n)
}

/// `B_n` for `v·v_X`.
pub fn adomian_b(v: &ComponentList, n: usize) -> Result<Expression> {
    self_convection(v, n)
}

/// `C_n` for `u·v`.
pub fn adomian_c(u: &ComponentList, v: &ComponentList, n: usize) -> Result<Expression> {
    u.require(n)?;
    v.require(n)?;
    Ok((0..=n)
        .map(|k| u[k].multiply(&v[n - k]))
        .fold(Expression::zero(), |acc, e| acc.add(&e)))
}
