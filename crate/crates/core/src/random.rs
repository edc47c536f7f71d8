//! Seeded generation of value functions, arrays and changes of basis.
//!
//! All randomness goes through a caller-owned [`ChaCha8Rng`], so a seed fixes
//! every output.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::billiard::{BilliardArray, ConcreteBilliardArray};
use crate::error::{Error, Result};
use crate::field::{FieldContext, Scalar};
use crate::labelling::{EdgeLabelling, ValueFunction};
use crate::linalg::Matrix;

/// Attempts allowed when sampling invertible matrices.
pub const MAX_RETRIES: usize = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero scalar: uniform over GF(p)ˣ, `a/b` with `a ∈ [−5,5]∖{0}`, `b ∈ [1,5]`
/// over ℚ, and `q^k` with `k ∈ [−3,3]` over ℚ(q).
pub fn nonzero_scalar(ctx: FieldContext, rng: &mut ChaCha8Rng) -> Scalar {
    match ctx {
        FieldContext::PrimeField(p) => ctx.int(rng.random_range(1..p) as i64),
        FieldContext::Rationals => {
            let a = loop {
                let a: i64 = rng.random_range(-5..=5);
                if a != 0 {
                    break a;
                }
            };
            ctx.ratio(a, rng.random_range(1..=5)).expect("denominator is positive")
        }
        FieldContext::RationalFunctions => {
            ctx.q().expect("ℚ(q) has q").pow(rng.random_range(-3..=3)).expect("q is invertible")
        }
    }
}

/// Any scalar, used for matrix entries: uniform over GF(p), integers in `[−3,3]` otherwise.
pub fn entry(ctx: FieldContext, rng: &mut ChaCha8Rng) -> Scalar {
    match ctx {
        FieldContext::PrimeField(p) => ctx.int(rng.random_range(0..p) as i64),
        _ => ctx.int(rng.random_range(-3..=3)),
    }
}

pub fn value_function(n: usize, ctx: FieldContext, rng: &mut ChaCha8Rng) -> Result<ValueFunction> {
    ValueFunction::from_fn(n, ctx, |_| nonzero_scalar(ctx, rng))
}

pub fn invertible_matrix(ctx: FieldContext, dim: usize, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    for _ in 0..MAX_RETRIES {
        let rows = (0..dim).map(|_| (0..dim).map(|_| entry(ctx, rng)).collect()).collect();
        let m = Matrix::from_rows(ctx, dim, rows)?;
        if m.rank() == dim {
            return Ok(m);
        }
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}

/// The canonical array of a labelling: `ψ → β → 𝓑` with the standard boundary basis.
pub fn labelling(n: usize, ctx: FieldContext, rng: &mut ChaCha8Rng) -> Result<EdgeLabelling> {
    if n < 2 {
        return Ok(EdgeLabelling::all_ones(n, ctx));
    }
    EdgeLabelling::from_values_canonical(&value_function(n, ctx, rng)?)
}

/// A random array: random labelling, reconstruction, then optionally a random
/// rescaling of every vector and a random change of basis.
pub fn concrete_array(n: usize, ctx: FieldContext, mix: bool, rng: &mut ChaCha8Rng) -> Result<ConcreteBilliardArray> {
    let cba = labelling(n, ctx, rng)?.reconstruct_standard()?;
    if !mix {
        return Ok(cba);
    }
    let kappa: BTreeMap<_, _> = cba.grid().locations().iter().map(|l| (*l, nonzero_scalar(ctx, rng))).collect();
    let m = invertible_matrix(ctx, n + 1, rng)?;
    cba.rescale(&kappa)?.map(&m)
}

pub fn billiard_array(n: usize, ctx: FieldContext, rng: &mut ChaCha8Rng) -> Result<BilliardArray> {
    concrete_array(n, ctx, true, rng)?.to_billiard()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        for ctx in [FieldContext::Rationals, FieldContext::prime(7).unwrap(), FieldContext::RationalFunctions] {
            let a = concrete_array(3, ctx, true, &mut rng(9)).unwrap();
            let b = concrete_array(3, ctx, true, &mut rng(9)).unwrap();
            assert_eq!(a, b);
            assert!(a.verify().is_ok());
        }
    }

    #[test]
    fn nonzero_draws() {
        let mut r = rng(1);
        for ctx in [FieldContext::Rationals, FieldContext::prime(2).unwrap(), FieldContext::RationalFunctions] {
            for _ in 0..100 {
                assert!(!nonzero_scalar(ctx, &mut r).is_zero());
            }
        }
    }

    #[test]
    fn invertible_over_gf2() {
        let ctx = FieldContext::prime(2).unwrap();
        let m = invertible_matrix(ctx, 4, &mut rng(3)).unwrap();
        assert!(m.inverse().is_some());
    }
}
