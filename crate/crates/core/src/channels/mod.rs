//! Finite distributions, discrete memoryless channels and their compositions.

mod compose;
mod pmf;
pub mod random;
mod spec;

pub use compose::{
    concat_aux, concat_aux_wtap, concat_kernel, joint_full, sum_kernel, superpose, var,
};
pub use pmf::{flatten, unflatten, CondKernel, Joint, Pmf, DEFAULT_TOL};
pub use spec::{Alphabets, AuxInput, MacWiretapSpec, Model, SpecFile};
