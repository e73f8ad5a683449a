//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use tracecat::axioms::{check_all_axioms, AxiomReport};
use tracecat::category::{SampleRng, TracedCategory};
use tracecat::cpo::Cpo;
use tracecat::finfun::{PInj, Pfn, Rel};
use tracecat::games::{par_hide_g, unfold_g_plays};
use tracecat::int::{check_all_g_laws, check_execution_formula, Int};
use tracecat::stoch::{kern_trace_exact, kern_trace_series, Stoch, SubstochMatrix};
use tracecat::transducer::Resumptions;

use common::golden::{contract_problems, load_cases, run_case};
use common::oracles::{bisim_case, pfn_case, rel_case, stoch_case, wire};
use common::sample_g_pair;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(problems: Vec<String>, summary: String) -> Verdict {
    match problems.first() {
        None => Verdict {
            pass: true,
            detail: summary,
        },
        Some(first) => Verdict {
            pass: false,
            detail: format!("{summary}; {} problem(s), first: {first}", problems.len()),
        },
    }
}

fn failed_reports(reports: &[AxiomReport], instance: &str) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed() || r.skipped.is_some())
        .map(|r| format!("{instance}: {r}"))
        .collect()
}

fn axioms() -> Verdict {
    fn run<C: TracedCategory>(cat: &C, problems: &mut Vec<String>, checks: &mut usize) {
        let reports = check_all_axioms(cat, 100, 17);
        *checks += reports.len();
        problems.extend(failed_reports(&reports, cat.name()));
    }
    let start = Instant::now();
    let (mut problems, mut checks) = (Vec::new(), 0);
    run(&Pfn, &mut problems, &mut checks);
    run(&PInj, &mut problems, &mut checks);
    run(&Rel, &mut problems, &mut checks);
    run(&Stoch::default(), &mut problems, &mut checks);
    run(&Cpo::default(), &mut problems, &mut checks);
    run(&Resumptions::default(), &mut problems, &mut checks);
    let secs = start.elapsed().as_secs_f64();
    if checks != 42 {
        problems.push(format!("expected 7 axioms × 6 instances, ran {checks}"));
    }
    if secs >= 60.0 {
        problems.push(format!("took {secs:.1} s, over the 60 s budget"));
    }
    verdict(
        problems,
        format!("7 axioms × 6 instances × 100 samples in {secs:.1} s"),
    )
}

fn g_laws() -> Verdict {
    fn run<C: TracedCategory>(cat: C, problems: &mut Vec<String>, checks: &mut usize) {
        let name = cat.name().to_string();
        let reports = check_all_g_laws(&Int::new(cat), 200, 23);
        *checks += reports.len();
        problems.extend(failed_reports(&reports, &name));
    }
    let (mut problems, mut checks) = (Vec::new(), 0);
    run(Pfn, &mut problems, &mut checks);
    run(PInj, &mut problems, &mut checks);
    run(Rel, &mut problems, &mut checks);
    run(Stoch::default(), &mut problems, &mut checks);
    run(Cpo::default(), &mut problems, &mut checks);
    run(Resumptions::default(), &mut problems, &mut checks);
    verdict(
        problems,
        format!("{checks} law checks × 200 samples over 6 instances"),
    )
}

fn plays_oracle() -> Verdict {
    let int = Int::new(Resumptions::default());
    let mut rng = SampleRng::seed_from_u64(31);
    let mut problems = Vec::new();
    let mut plays = 0;
    for i in 0..200 {
        let (f, g) = sample_g_pair(&mut rng, 3);
        let depth = rng.gen_range(0..=6);
        let lhs = par_hide_g(&f, &g, depth);
        let rhs = int.compose(&f, &g).map(|h| unfold_g_plays(&h, depth));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => plays += l.len(),
            (Ok(_), Ok(_)) => problems.push(format!("pair {i} differs at depth {depth}")),
            (l, r) => problems.push(format!("pair {i}: {:?} / {:?}", l.err(), r.err())),
        }
    }
    verdict(
        problems,
        format!("200 strategy pairs, ≤3 states, depth ≤6, {plays} plays compared"),
    )
}

fn execution_formula() -> Verdict {
    let r = check_execution_formula(200, 37);
    let problems = if r.passed() {
        Vec::new()
    } else {
        vec![r.to_string()]
    };
    verdict(
        problems,
        format!("{} PInj pairs against the token walk", r.samples),
    )
}

fn stoch_trace() -> Verdict {
    let mut rng = SampleRng::seed_from_u64(41);
    let mut problems = Vec::new();
    let (mut compared, mut singular) = (0, 0);
    while compared < 200 && compared + singular < 2000 {
        match stoch_case(&mut rng) {
            Ok(true) => compared += 1,
            Ok(false) => singular += 1,
            Err(e) => {
                compared += 1;
                problems.push(e);
            }
        }
    }
    if compared < 200 {
        problems.push(format!("only {compared} non-singular samples"));
    }
    let u = wire("U", 1);
    for (fuy, want) in [(0.5, 1.0), (0.25, 0.5)] {
        let f = SubstochMatrix::from_rows(
            wire("X", 1).tensor(&u),
            wire("Y", 1).tensor(&u),
            &[vec![0.0, 1.0], vec![fuy, 0.5]],
        )
        .unwrap();
        let got = [
            kern_trace_series(&f, &u, 1e-12).map(|k| k.get(0, 0)),
            kern_trace_exact(&f, &u).map(|k| k.get(0, 0)),
            Stoch::default().trace(&f, &u).map(|k| k.get(0, 0)),
        ];
        for g in got {
            match g {
                Ok(v) if (v - want).abs() <= 1e-12 => {}
                other => problems.push(format!("F_UY={fuy}: expected {want}, got {other:?}")),
            }
        }
    }
    verdict(
        problems,
        format!("{compared} kernels within 1e-9 ({singular} singular skipped); geometric cases 1.0 and 0.5"),
    )
}

fn rel_pfn_oracle() -> Verdict {
    let mut rng = SampleRng::seed_from_u64(43);
    let mut problems = Vec::new();
    for nu in 0..=6 {
        for _ in 0..100 {
            problems.extend(rel_case(nu, &mut rng).err());
        }
    }
    for _ in 0..200 {
        problems.extend(pfn_case(&mut rng).err());
    }
    verdict(
        problems,
        "100 relations per |U| = 0..6; 200 functions against rel_trace".into(),
    )
}

fn bisim_plays() -> Verdict {
    let mut rng = SampleRng::seed_from_u64(47);
    let mut problems = Vec::new();
    let mut equivalent = 0;
    for _ in 0..200 {
        match bisim_case(&mut rng) {
            Ok(eq) => equivalent += usize::from(eq),
            Err(e) => problems.push(e),
        }
    }
    if equivalent == 0 || equivalent == 200 {
        problems.push(format!(
            "{equivalent} of 200 pairs equivalent; both outcomes must occur"
        ));
    }
    verdict(problems, format!("200 pairs, {equivalent} equivalent"))
}

fn cli_goldens() -> Verdict {
    let cases = load_cases();
    let mut problems: Vec<String> = cases
        .iter()
        .map(run_case)
        .filter_map(|o| o.problem.map(|p| format!("{}: {p}", o.name)))
        .collect();
    problems.extend(contract_problems());
    verdict(
        problems,
        format!("{} golden cases and the exit-code contract", cases.len()),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 8] = [
        ("traced monoidal axioms", axioms),
        ("G laws", g_laws),
        ("plays oracle", plays_oracle),
        ("execution formula", execution_formula),
        ("stochastic trace", stoch_trace),
        ("rel/pfn oracle", rel_pfn_oracle),
        ("bisimulation/plays coherence", bisim_plays),
        ("CLI goldens", cli_goldens),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        all &= v.pass;
        println!(
            "criterion {}: {} {name}: {} [{:.1} s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
