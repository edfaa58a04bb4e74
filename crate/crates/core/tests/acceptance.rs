//! Acceptance suite: every release criterion at its stated size and
//! tolerance, one pass/fail line per criterion.
//!
//! Run with `cargo test -p indefspec-core --test acceptance -- --nocapture`
//! to see the lines as they complete.

use indefspec_core::validate::{self, CheckResult};
use indefspec_core::SolverConfig;

struct Criterion {
    label: &'static str,
    budget_seconds: f64,
    result: CheckResult,
}

#[test]
fn acceptance_criteria() {
    let cfg = SolverConfig::default();
    let mut criteria: Vec<Criterion> = Vec::new();

    criteria.push(Criterion {
        label: "criterion 1 (zero root, n <= 10)",
        budget_seconds: 1.0,
        result: validate::check_zero_root(10),
    });
    criteria.push(Criterion {
        label: "criterion 2 (closed-form derivative, n <= 10)",
        budget_seconds: 1.0,
        result: validate::check_derivative_closed_form(10),
    });
    criteria.push(Criterion {
        label: "criterion 3 (spectral gap, n <= 5, 10^4-point scan)",
        budget_seconds: 5.0,
        result: validate::check_spectral_gap(5, 10_000),
    });
    let [symmetry, simplicity] = validate::check_symmetry_and_simplicity(5, 10, &cfg);
    criteria.push(Criterion {
        label: "criterion 4 (symmetry, independent negative-side solve)",
        budget_seconds: 10.0,
        result: symmetry,
    });
    criteria.push(Criterion {
        label: "criterion 5 (root simplicity)",
        budget_seconds: 10.0,
        result: simplicity,
    });
    criteria.push(Criterion {
        label: "criterion 6 (oracle equivalence, N in {400, 800, 1600})",
        budget_seconds: 30.0,
        result: validate::check_oracle_equivalence(&[1, 2], 3, &[400, 800, 1600], &cfg),
    });
    criteria.push(Criterion {
        label: "criterion 7 (normalization and orthonormality)",
        budget_seconds: 20.0,
        result: validate::check_normalization_orthonormality(3, 2, &cfg),
    });
    criteria.push(Criterion {
        label: "criterion 8 (interface conditions)",
        budget_seconds: 5.0,
        result: validate::check_interface_conditions(&cfg),
    });
    criteria.push(Criterion {
        label: "criterion 9 (kernel functions, k <= 3)",
        budget_seconds: 5.0,
        result: validate::check_kernel_functions(3),
    });
    criteria.push(Criterion {
        label: "criterion 10 (delta -> 0 convergence families)",
        budget_seconds: 15.0,
        result: validate::check_convergence_families(&cfg),
    });
    criteria.push(Criterion {
        label: "criterion 11 (compatibility bound on |delta| = 0.38)",
        budget_seconds: 5.0,
        result: validate::check_compatibility_bound(64, 20),
    });
    criteria.push(Criterion {
        label: "criterion 12 (accumulation, caps 10^2..10^4)",
        budget_seconds: 10.0,
        result: validate::check_accumulation(&[1e2, 1e3, 1e4], 5, &cfg),
    });

    let mut failures = Vec::new();
    for c in &criteria {
        println!("{}: {}", c.label, c.result.line());
        if !c.result.passed {
            failures.push(format!("{} -> {}", c.label, c.result.line()));
        }
        if c.result.seconds >= c.budget_seconds {
            failures.push(format!(
                "{} exceeded its {:.0}s budget ({:.2}s)",
                c.label, c.budget_seconds, c.result.seconds
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "{} acceptance failure(s):\n{}",
        failures.len(),
        failures.join("\n")
    );
}
