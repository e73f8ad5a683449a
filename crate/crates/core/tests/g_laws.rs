use tracecat::category::TracedCategory;
use tracecat::cpo::Cpo;
use tracecat::finfun::{PInj, Pfn, Rel};
use tracecat::int::{check_all_g_laws, Int};
use tracecat::stoch::Stoch;
use tracecat::transducer::Resumptions;

const SAMPLES: usize = 200;

fn all_pass<C: TracedCategory>(base: C) {
    let reports = check_all_g_laws(&Int::new(base), SAMPLES, 11);
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.to_string())
        .collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}

#[test]
fn pfn() {
    all_pass(Pfn);
}

#[test]
fn pinj() {
    all_pass(PInj);
}

#[test]
fn rel() {
    all_pass(Rel);
}

#[test]
fn stoch() {
    all_pass(Stoch::default());
}

#[test]
fn cpo() {
    all_pass(Cpo::default());
}

#[test]
fn transducer() {
    all_pass(Resumptions::default());
}
