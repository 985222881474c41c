//! Tensor-sum maps and their maximal-rank properties.

pub mod basis;
pub mod tensor;
pub mod verdict;

pub use basis::{generic_basis, hl_analog_basis, unit_elements, Certificate, HlAnalog, HlBlock};
pub use tensor::{
    alpha_rank, cyclic_submodule, dimension_bound, flatten, kronecker, quotient_tensor_map, Block, BoundReport,
    Direction, Side, TensorSumMap,
};
pub use verdict::{
    all_profiles, check, check_left_general, check_left_omnipresent, check_right_general, check_right_omnipresent,
    CheckMode, ProfileStats, Property, Verdict, Witness, DEFAULT_BUDGET, DEFAULT_THRESHOLD,
};
