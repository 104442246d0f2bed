use std::path::PathBuf;
use std::sync::OnceLock;
use toa_oracle::fixtures::FixtureFile;

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/oracle_fixtures.json")
}

pub fn fixtures() -> &'static FixtureFile {
    static CELL: OnceLock<FixtureFile> = OnceLock::new();
    CELL.get_or_init(|| {
        toa_oracle::fixtures::load(&fixture_path())
            .expect("fixtures/oracle_fixtures.json missing; run `toa fixtures --generate`")
    })
}

pub fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let denom = want.abs().max(1e-300);
    assert!(
        (got - want).abs() <= tol * denom,
        "{what}: got {got}, want {want} (rel err {:.3e} > {tol:.1e})",
        (got - want).abs() / denom
    );
}

#[allow(dead_code)]
pub fn assert_rel_c(got: toa::Complex64, want: toa::Complex64, tol: f64, what: &str) {
    let denom = want.norm().max(1e-300);
    assert!(
        (got - want).norm() <= tol * denom,
        "{what}: got {got}, want {want} (rel err {:.3e} > {tol:.1e})",
        (got - want).norm() / denom
    );
}
