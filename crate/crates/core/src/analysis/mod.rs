//! Term families, complexity checkers, and the benchmark driver.

mod bench;
mod checks;
mod families;

pub use bench::{bench, run_instance, write_csv, BenchRow, InstanceRun, CSV_HEADER};
pub use checks::{audit_measure, check_bilinear, check_transition_match, AuditFailure};
pub use families::{
    family_fun_explosion, family_quadratic_wrap, family_tuple_explosion, fun_explosion_nf_size,
    quadratic_wrap_driver, tuple_explosion_nf_size, Family,
};
