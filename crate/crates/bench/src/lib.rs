//! Seeded inputs shared by the criterion benches in `benches/`.

use billiard::random::{self, rng};
use billiard::{BilliardArray, EdgeLabelling, FieldContext, Scalar, ValueFunction};

pub fn gf101() -> FieldContext {
    FieldContext::prime(101).expect("101 is prime")
}

pub fn value_function(n: usize, ctx: FieldContext, seed: u64) -> ValueFunction {
    random::value_function(n, ctx, &mut rng(seed)).expect("valid diameter")
}

pub fn array(n: usize, ctx: FieldContext, seed: u64) -> BilliardArray {
    random::billiard_array(n, ctx, &mut rng(seed)).expect("random array")
}

/// The standard array with constant value `psi`.
pub fn constant_array(n: usize, psi: &Scalar) -> BilliardArray {
    let el = if n >= 2 {
        EdgeLabelling::from_values_canonical(&ValueFunction::constant(n, psi).expect("n ≥ 2")).expect("labelling")
    } else {
        EdgeLabelling::all_ones(n, psi.ctx())
    };
    el.reconstruct_standard().and_then(|c| c.to_billiard()).expect("array")
}
