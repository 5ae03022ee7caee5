//! Shared setup for the criterion benchmarks.

use qsearch_core::{gen_distinctness_instance, gen_two_to_one, FunctionInstance};

pub fn collision_instance(n: u64) -> FunctionInstance {
    gen_two_to_one(n, n, 0xb055).expect("valid benchmark instance")
}

pub fn distinctness_instance(n: u64) -> FunctionInstance {
    gen_distinctness_instance(n, 1, 2 * n, 0xd157).expect("valid benchmark instance")
}
