//! Executable entropy inequalities over continuous models.

mod corpus;
mod functionals;
mod inverse;
mod registry;

pub use corpus::{
    random_corpus, run_inverse, run_registry, run_tasks, schedule, Task, DEFAULT_CORPUS_SIZE,
};
pub use functionals::{
    combine, doubling_and_difference, lapidoth_pete_gap, lapidoth_pete_model, ruzsa_distance,
    sum_difference_gap, uniform_lattice_mixture, Evaluator, RuzsaFunctionals, HALF_LN_2,
    POSITIVE_GAP_LATTICE,
};
pub use inverse::{
    inverse_quantities, inverse_theorem_check, reports_from, InverseQuantities, INVERSE_REPORT_IDS,
};
pub use registry::{
    describe_inputs, find_check, plunnecke_gaussian_gap, run_check, CheckDef, Param, REGISTRY,
};
