//! Verification recipes for the inequality chains and finite scans over
//! the corpus.

mod family;
mod report;
mod scanners;
mod shell_orders;
mod theorem;

pub use family::{family_ratio_report, is_nilpotent, kd_ratio, kd_report};
pub use report::{Check, Quantity, VerificationReport};
pub use scanners::{
    a5_threshold, abelianization_exponent, psi_ratio_threshold, scan_conjecture_a5, scan_k_exp,
    scan_psi_max,
};
pub use shell_orders::{
    orbit_sum_matrix, pair_order_by_orbit_sum, structural_bound, verify_shell_orders, CountingMode,
    ShellOrdersOutcome, AUTO_EXHAUSTIVE_LIMIT,
};
pub use theorem::{anti_hughes_bound, proof_bound, verify_chain_symbolic, verify_theorem};
