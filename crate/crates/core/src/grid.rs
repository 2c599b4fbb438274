//! Geometric grid over path counts.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numeric::DyadicBase;

/// Path counts `q^0, q^1, ..., q^s_max` with `q = 1 + 2^-t`.
///
/// `t` is the smallest shift with `q^fineness <= 1 + eps`, where the
/// fineness exponent is `n + 1` for single-instance counting and `n` for the
/// bi-criteria table. `q^s_max` covers `2^(n-2)`, and also the exact path
/// count, which can be larger in multigraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QGrid {
    eps: BigRational,
    vertices: usize,
    fineness: u32,
    base: DyadicBase,
    s_max: usize,
}

impl QGrid {
    pub fn single_instance(
        eps: &BigRational,
        vertices: usize,
        total_paths: &BigUint,
    ) -> Result<QGrid> {
        Self::with_fineness(eps, vertices, vertices as u32 + 1, total_paths)
    }

    pub fn bicriteria(eps: &BigRational, vertices: usize, total_paths: &BigUint) -> Result<QGrid> {
        Self::with_fineness(eps, vertices, vertices as u32, total_paths)
    }

    pub fn with_fineness(
        eps: &BigRational,
        vertices: usize,
        fineness: u32,
        total_paths: &BigUint,
    ) -> Result<QGrid> {
        if !eps.is_positive() {
            return Err(Error::NonPositiveParameter { name: "epsilon" });
        }
        let bound = BigRational::one() + eps;
        let base = DyadicBase::coarsest_within(&bound, fineness.max(1));
        let structural = BigUint::one() << vertices.saturating_sub(2);
        let cover = structural.max(total_paths.clone());
        let s_max = base.ceil_log_int(&cover) as usize;
        Ok(QGrid {
            eps: eps.clone(),
            vertices,
            fineness,
            base,
            s_max,
        })
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn fineness(&self) -> u32 {
        self.fineness
    }

    pub fn base(&self) -> DyadicBase {
        self.base
    }

    /// Exact `q`.
    pub fn q(&self) -> BigRational {
        self.base.value()
    }

    pub fn shift(&self) -> u32 {
        self.base.shift()
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }
}
