//! Divisors of invariant functions on the minimal resolution of ℂ²/G.

pub mod a;
pub mod d;
pub mod e;

pub use a::{
    chart_expression, divisor_profile_a, monomial_to_chart, valuation_a, ChartExpression, ChartMap,
    ToricComponent, ToricResolution,
};
pub use d::{
    chart_expression_d, class_point, degenerate_check, distinguished_function, divisor_profile_d,
    divisor_profile_d_of, recover_c,
    rho_intersection_point, DTypeGeometry, DegenerateCheck, Degeneracy, DProfile,
};
pub use e::{branch_data, candidate_profile_e, divisor_profile_e, quotient_map, BranchData, CriticalValue};

/// Names for n open components: the bare prefix when there is one, numbered otherwise.
pub(crate) fn open_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}
