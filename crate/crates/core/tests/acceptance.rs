//! The sixteen-battery acceptance gate, run at full depth. Each test
//! prints its named subchecks and fails listing exactly which comparisons
//! broke, so one line per criterion appears in the test output.

use k3lab_core::report::{criterion_checks, TestLevel, CRITERION_TITLES};

fn run(index: usize) {
    let title = CRITERION_TITLES[index - 1];
    let checks = criterion_checks(index, TestLevel::Full)
        .unwrap_or_else(|e| panic!("battery {index} ({title}) failed to run: {e}"));
    assert!(!checks.is_empty(), "battery {index} ({title}) ran no checks");
    let mut failures = Vec::new();
    for check in &checks {
        let verdict = if check.pass { "pass" } else { "FAIL" };
        println!(
            "  {verdict}  {}: expected {}, got {}",
            check.name, check.expected, check.actual
        );
        if !check.pass {
            failures.push(format!(
                "{}: expected {}, got {}",
                check.name, check.expected, check.actual
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "battery {index} ({title}): {} of {} checks failed\n{}",
        failures.len(),
        checks.len(),
        failures.join("\n")
    );
}

#[test]
fn criterion_01_minor_determinants() {
    run(1);
}

#[test]
fn criterion_02_smoothness_verdicts() {
    run(2);
}

#[test]
fn criterion_03_distinguished_member_recovers_the_quadric_system() {
    run(3);
}

#[test]
fn criterion_04_lines_and_intersection_graphs() {
    run(4);
}

#[test]
fn criterion_05_rank_four_quadrics() {
    run(5);
}

#[test]
fn criterion_06_elliptic_fibrations() {
    run(6);
}

#[test]
fn criterion_07_picard_lattice_invariants() {
    run(7);
}

#[test]
fn criterion_08_mordell_weil_groups() {
    run(8);
}

#[test]
fn criterion_09_symmetry_class_lattice_chains() {
    run(9);
}

#[test]
fn criterion_10_solution_family() {
    run(10);
}

#[test]
fn criterion_11_section_lines() {
    run(11);
}

#[test]
fn criterion_12_surface_point_counts() {
    run(12);
}

#[test]
fn criterion_13_supersingular_scan() {
    run(13);
}

#[test]
fn criterion_14_mod8_matrix_group() {
    run(14);
}

#[test]
fn criterion_15_quartic_splitting() {
    run(15);
}

#[test]
fn criterion_16_parametrization_checker() {
    run(16);
}
