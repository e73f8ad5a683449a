//! Randomised checking of the traced monoidal axioms and the basic category
//! laws against any [`TracedCategory`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};

use crate::category::{compose_all, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::ObjectExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomId {
    NatX,
    NatY,
    NatU,
    VanishI,
    VanishTensor,
    Superpose,
    Yank,
}

impl AxiomId {
    pub const ALL: [AxiomId; 7] = [
        AxiomId::NatX,
        AxiomId::NatY,
        AxiomId::NatU,
        AxiomId::VanishI,
        AxiomId::VanishTensor,
        AxiomId::Superpose,
        AxiomId::Yank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::NatX => "nat-X",
            AxiomId::NatY => "nat-Y",
            AxiomId::NatU => "nat-U",
            AxiomId::VanishI => "vanish-I",
            AxiomId::VanishTensor => "vanish-tensor",
            AxiomId::Superpose => "superpose",
            AxiomId::Yank => "yank",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unbound(format!("axiom {s}")))
    }
}

/// Structural laws checked alongside the trace axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    Assoc,
    LeftUnit,
    RightUnit,
    SymInverse,
    EqualEquivalence,
}

impl Law {
    pub const ALL: [Law; 5] = [
        Law::Assoc,
        Law::LeftUnit,
        Law::RightUnit,
        Law::SymInverse,
        Law::EqualEquivalence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Law::Assoc => "assoc",
            Law::LeftUnit => "unit-left",
            Law::RightUnit => "unit-right",
            Law::SymInverse => "sym-inverse",
            Law::EqualEquivalence => "equal-equivalence",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// Seed of the per-sample generator; rerunning with it reproduces the case.
    pub sample_seed: u64,
    pub morphisms: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: String,
    pub instance: String,
    pub samples: usize,
    pub failures: Vec<Failure>,
    pub skipped: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if let Some(why) = &self.skipped {
            format!("skipped ({why})")
        } else if self.passed() {
            "pass".to_string()
        } else {
            format!("FAIL ({} counterexamples)", self.failures.len())
        };
        write!(
            f,
            "{} {}: {} [{} samples]",
            self.instance, self.axiom, verdict, self.samples
        )?;
        for fail in self.failures.iter().take(3) {
            write!(
                f,
                "\n  sample seed {}: {}\n    lhs = {}\n    rhs = {}",
                fail.sample_seed,
                fail.morphisms.join(" | "),
                fail.lhs,
                fail.rhs
            )?;
        }
        Ok(())
    }
}

/// Object size limits for sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleLimits {
    pub max_wires: usize,
    pub max_elems: usize,
}

impl Default for SampleLimits {
    fn default() -> Self {
        SampleLimits {
            max_wires: 4,
            max_elems: 5,
        }
    }
}

/// Seed for sample `i` of check `tag`, mixed with splitmix64.
pub fn sample_seed(seed: u64, tag: u64, i: u64) -> u64 {
    let mut z = seed
        .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(i.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sample_object<C: TracedCategory>(
    cat: &C,
    rng: &mut SampleRng,
    limits: SampleLimits,
    counter: &mut usize,
) -> ObjectExpr {
    let n = rng.gen_range(0..=limits.max_wires);
    (0..n)
        .map(|_| {
            *counter += 1;
            cat.sample_wire(rng, format!("W{counter}"), limits.max_elems)
        })
        .collect()
}

/// Samples `n` objects whose composites (as listed by `composites`) fit the
/// instance budget, shrinking the limits until they do. Returns `None` when
/// even the smallest objects do not fit.
pub fn sample_objects<C, F>(
    cat: &C,
    rng: &mut SampleRng,
    n: usize,
    limits: SampleLimits,
    composites: F,
) -> Option<Vec<ObjectExpr>>
where
    C: TracedCategory,
    F: Fn(&[ObjectExpr]) -> Vec<ObjectExpr>,
{
    let mut limits = limits;
    let mut counter = 0;
    loop {
        let objs: Vec<ObjectExpr> = (0..n)
            .map(|_| sample_object(cat, rng, limits, &mut counter))
            .collect();
        if composites(&objs)
            .iter()
            .all(|o| cat.size(o) <= cat.sample_budget())
        {
            return Some(objs);
        }
        if limits.max_wires > 1 {
            limits.max_wires -= 1;
        } else if limits.max_elems > 1 {
            limits.max_elems -= 1;
        } else if limits.max_wires == 1 {
            limits.max_wires = 0;
        } else {
            return None;
        }
    }
}

fn t(objs: &[&ObjectExpr]) -> ObjectExpr {
    ObjectExpr::tensor_all(objs.iter().copied())
}

/// One sampled instance of an axiom: the morphisms it quantifies over and
/// both sides evaluated.
pub(crate) struct Case<M> {
    pub(crate) inputs: Vec<M>,
    pub(crate) lhs: M,
    pub(crate) rhs: M,
    /// Verdict computed by the case itself instead of `equal(lhs, rhs)`.
    pub(crate) verdict: Option<bool>,
}

fn axiom_case<C: TracedCategory>(
    cat: &C,
    axiom: AxiomId,
    rng: &mut SampleRng,
    limits: SampleLimits,
) -> std::result::Result<Result<Case<C::Mor>>, String> {
    let skip = || {
        format!(
            "{} cannot fit objects for {axiom} in its sampling budget",
            cat.name()
        )
    };
    let id = |o: &ObjectExpr| cat.identity(o);
    let case = match axiom {
        AxiomId::NatX => {
            // Tr((g ⊗ id_U); f) = g; Tr(f),  f : X' ⊗ U → Y ⊗ U,  g : X → X'
            let o = sample_objects(cat, rng, 4, limits, |o| {
                vec![t(&[&o[0], &o[3]]), t(&[&o[1], &o[3]]), t(&[&o[2], &o[3]])]
            })
            .ok_or_else(skip)?;
            let (x, x2, y, u) = (&o[0], &o[1], &o[2], &o[3]);
            let f = cat.sample(&t(&[x2, u]), &t(&[y, u]), rng);
            let g = cat.sample(x, x2, rng);
            (|| {
                let lhs = cat.trace(&cat.compose(&cat.tensor(&g, &id(u)?)?, &f)?, u)?;
                let rhs = cat.compose(&g, &cat.trace(&f, u)?)?;
                Ok(Case {
                    inputs: vec![f.clone(), g.clone()],
                    lhs,
                    rhs,
                    verdict: None,
                })
            })()
        }
        AxiomId::NatY => {
            // Tr(f; (g ⊗ id_U)) = Tr(f); g,  f : X ⊗ U → Y' ⊗ U,  g : Y' → Y
            let o = sample_objects(cat, rng, 4, limits, |o| {
                vec![t(&[&o[0], &o[3]]), t(&[&o[1], &o[3]]), t(&[&o[2], &o[3]])]
            })
            .ok_or_else(skip)?;
            let (x, y2, y, u) = (&o[0], &o[1], &o[2], &o[3]);
            let f = cat.sample(&t(&[x, u]), &t(&[y2, u]), rng);
            let g = cat.sample(y2, y, rng);
            (|| {
                let lhs = cat.trace(&cat.compose(&f, &cat.tensor(&g, &id(u)?)?)?, u)?;
                let rhs = cat.compose(&cat.trace(&f, u)?, &g)?;
                Ok(Case {
                    inputs: vec![f.clone(), g.clone()],
                    lhs,
                    rhs,
                    verdict: None,
                })
            })()
        }
        AxiomId::NatU => {
            // Tr^U(f; (id_Y ⊗ g)) = Tr^{U'}((id_X ⊗ g); f),  f : X ⊗ U → Y ⊗ U',  g : U' → U
            let o = sample_objects(cat, rng, 4, limits, |o| {
                vec![
                    t(&[&o[0], &o[2]]),
                    t(&[&o[0], &o[3]]),
                    t(&[&o[1], &o[2]]),
                    t(&[&o[1], &o[3]]),
                ]
            })
            .ok_or_else(skip)?;
            let (x, y, u, u2) = (&o[0], &o[1], &o[2], &o[3]);
            let f = cat.sample(&t(&[x, u]), &t(&[y, u2]), rng);
            let g = cat.sample(u2, u, rng);
            (|| {
                let lhs = cat.trace(&cat.compose(&f, &cat.tensor(&id(y)?, &g)?)?, u)?;
                let rhs = cat.trace(&cat.compose(&cat.tensor(&id(x)?, &g)?, &f)?, u2)?;
                Ok(Case {
                    inputs: vec![f.clone(), g.clone()],
                    lhs,
                    rhs,
                    verdict: None,
                })
            })()
        }
        AxiomId::VanishI => {
            let o = sample_objects(cat, rng, 2, limits, |o| o.to_vec()).ok_or_else(skip)?;
            let f = cat.sample(&o[0], &o[1], rng);
            (|| {
                let lhs = cat.trace(&f, &ObjectExpr::unit())?;
                Ok(Case {
                    inputs: vec![f.clone()],
                    lhs,
                    rhs: f.clone(),
                    verdict: None,
                })
            })()
        }
        AxiomId::VanishTensor => {
            // Tr^{U⊗V}(f) = Tr^U(Tr^V(f)),  f : X ⊗ U ⊗ V → Y ⊗ U ⊗ V
            let o = sample_objects(cat, rng, 4, limits, |o| {
                vec![t(&[&o[0], &o[2], &o[3]]), t(&[&o[1], &o[2], &o[3]])]
            })
            .ok_or_else(skip)?;
            let (x, y, u, v) = (&o[0], &o[1], &o[2], &o[3]);
            let f = cat.sample(&t(&[x, u, v]), &t(&[y, u, v]), rng);
            (|| {
                let lhs = cat.trace(&f, &t(&[u, v]))?;
                let rhs = cat.trace(&cat.trace(&f, v)?, u)?;
                Ok(Case {
                    inputs: vec![f.clone()],
                    lhs,
                    rhs,
                    verdict: None,
                })
            })()
        }
        AxiomId::Superpose => {
            // Tr^U((id_X ⊗ sym_{Z,U}); (f ⊗ g); (id_Y ⊗ sym_{U,W})) = Tr^U(f) ⊗ g
            let o = sample_objects(cat, rng, 5, limits, |o| {
                vec![t(&[&o[0], &o[2], &o[4]]), t(&[&o[1], &o[3], &o[4]])]
            })
            .ok_or_else(skip)?;
            let (x, y, z, w, u) = (&o[0], &o[1], &o[2], &o[3], &o[4]);
            let f = cat.sample(&t(&[x, u]), &t(&[y, u]), rng);
            let g = cat.sample(z, w, rng);
            (|| {
                let pre = cat.tensor(&id(x)?, &cat.symmetry(z, u)?)?;
                let post = cat.tensor(&id(y)?, &cat.symmetry(u, w)?)?;
                let body = compose_all(cat, &[&pre, &cat.tensor(&f, &g)?, &post])?;
                let lhs = cat.trace(&body, u)?;
                let rhs = cat.tensor(&cat.trace(&f, u)?, &g)?;
                Ok(Case {
                    inputs: vec![f.clone(), g.clone()],
                    lhs,
                    rhs,
                    verdict: None,
                })
            })()
        }
        AxiomId::Yank => {
            let o = sample_objects(cat, rng, 1, limits, |o| vec![t(&[&o[0], &o[0]])]).ok_or_else(skip)?;
            let x = &o[0];
            (|| {
                let s = cat.symmetry(x, x)?;
                let lhs = cat.trace(&s, x)?;
                Ok(Case {
                    inputs: vec![s],
                    lhs,
                    rhs: id(x)?,
                    verdict: None,
                })
            })()
        }
    };
    Ok(case)
}

pub(crate) fn run_check<C, F>(
    cat: &C,
    name: &str,
    samples: usize,
    seed: u64,
    tag: u64,
    mut case: F,
) -> AxiomReport
where
    C: TracedCategory,
    F: FnMut(&mut SampleRng) -> std::result::Result<Result<Case<C::Mor>>, String>,
{
    let mut report = AxiomReport {
        axiom: name.to_string(),
        instance: cat.name().to_string(),
        samples,
        failures: Vec::new(),
        skipped: None,
    };
    for i in 0..samples {
        let s = sample_seed(seed, tag, i as u64);
        let mut rng = SampleRng::seed_from_u64(s);
        match case(&mut rng) {
            Err(why) => {
                report.skipped = Some(why);
                return report;
            }
            Ok(Err(e)) => report.failures.push(Failure {
                sample_seed: s,
                morphisms: vec![],
                lhs: format!("error: {e}"),
                rhs: String::new(),
            }),
            Ok(Ok(c)) => {
                let holds = c.verdict.unwrap_or_else(|| cat.equal(&c.lhs, &c.rhs));
                if !holds {
                    report.failures.push(Failure {
                        sample_seed: s,
                        morphisms: c.inputs.iter().map(|m| cat.describe(m)).collect(),
                        lhs: cat.describe(&c.lhs),
                        rhs: cat.describe(&c.rhs),
                    });
                }
            }
        }
    }
    report
}

pub fn check_axiom_with<C: TracedCategory>(
    cat: &C,
    axiom: AxiomId,
    samples: usize,
    seed: u64,
    limits: SampleLimits,
) -> AxiomReport {
    let tag = AxiomId::ALL.iter().position(|a| *a == axiom).unwrap() as u64;
    run_check(cat, axiom.as_str(), samples, seed, tag, |rng| {
        axiom_case(cat, axiom, rng, limits)
    })
}

/// Checks one trace axiom on `samples` random instances of its quantified
/// morphisms. Objects have up to 4 wires of up to 5 elements, shrunk to the
/// instance's sampling budget.
pub fn check_axiom<C: TracedCategory>(cat: &C, axiom: AxiomId, samples: usize, seed: u64) -> AxiomReport {
    check_axiom_with(cat, axiom, samples, seed, SampleLimits::default())
}

/// One report per trace axiom, in the fixed order of [`AxiomId::ALL`].
pub fn check_all_axioms<C: TracedCategory>(cat: &C, samples: usize, seed: u64) -> Vec<AxiomReport> {
    AxiomId::ALL
        .into_iter()
        .map(|a| check_axiom(cat, a, samples, seed))
        .collect()
}

fn law_case<C: TracedCategory>(
    cat: &C,
    law: Law,
    rng: &mut SampleRng,
    limits: SampleLimits,
) -> std::result::Result<Result<Case<C::Mor>>, String> {
    let skip = || {
        format!(
            "{} cannot fit objects for {} in its sampling budget",
            cat.name(),
            law.as_str()
        )
    };
    let case = match law {
        Law::Assoc => {
            let o = sample_objects(cat, rng, 4, limits, |o| o.to_vec()).ok_or_else(skip)?;
            let f = cat.sample(&o[0], &o[1], rng);
            let g = cat.sample(&o[1], &o[2], rng);
            let h = cat.sample(&o[2], &o[3], rng);
            (|| {
                let lhs = cat.compose(&cat.compose(&f, &g)?, &h)?;
                let rhs = cat.compose(&f, &cat.compose(&g, &h)?)?;
                Ok(Case {
                    inputs: vec![f.clone(), g.clone(), h.clone()],
                    lhs,
                    rhs,
                    verdict: None,
                })
            })()
        }
        Law::LeftUnit | Law::RightUnit => {
            let o = sample_objects(cat, rng, 2, limits, |o| o.to_vec()).ok_or_else(skip)?;
            let f = cat.sample(&o[0], &o[1], rng);
            (|| {
                let lhs = if law == Law::LeftUnit {
                    cat.compose(&cat.identity(f.dom())?, &f)?
                } else {
                    cat.compose(&f, &cat.identity(f.cod())?)?
                };
                Ok(Case {
                    inputs: vec![f.clone()],
                    lhs,
                    rhs: f.clone(),
                    verdict: None,
                })
            })()
        }
        Law::SymInverse => {
            let o = sample_objects(cat, rng, 2, limits, |o| vec![t(&[&o[0], &o[1]])]).ok_or_else(skip)?;
            (|| {
                let s = cat.symmetry(&o[0], &o[1])?;
                let lhs = cat.compose(&s, &cat.symmetry(&o[1], &o[0])?)?;
                Ok(Case {
                    inputs: vec![s],
                    lhs,
                    rhs: cat.identity(&t(&[&o[0], &o[1]]))?,
                    verdict: None,
                })
            })()
        }
        Law::EqualEquivalence => {
            // reflexivity on f, symmetry and transitivity on f, f;id, id;f and a random g
            let o = sample_objects(cat, rng, 2, limits, |o| o.to_vec()).ok_or_else(skip)?;
            let f = cat.sample(&o[0], &o[1], rng);
            let g = cat.sample(&o[0], &o[1], rng);
            (|| {
                let a = cat.compose(&f, &cat.identity(f.cod())?)?;
                let b = cat.compose(&cat.identity(f.dom())?, &f)?;
                let all = [&f, &a, &b, &g];
                let mut ok = all.iter().all(|m| cat.equal(m, m));
                for p in all {
                    for q in all {
                        ok &= cat.equal(p, q) == cat.equal(q, p);
                        for r in all {
                            if cat.equal(p, q) && cat.equal(q, r) {
                                ok &= cat.equal(p, r);
                            }
                        }
                    }
                }
                Ok(Case {
                    inputs: vec![f.clone(), g.clone()],
                    lhs: a,
                    rhs: b,
                    verdict: Some(ok),
                })
            })()
        }
    };
    Ok(case)
}

pub fn check_law<C: TracedCategory>(cat: &C, law: Law, samples: usize, seed: u64) -> AxiomReport {
    let tag = 100 + Law::ALL.iter().position(|l| *l == law).unwrap() as u64;
    run_check(cat, law.as_str(), samples, seed, tag, |rng| {
        law_case(cat, law, rng, SampleLimits::default())
    })
}

pub fn check_all_laws<C: TracedCategory>(cat: &C, samples: usize, seed: u64) -> Vec<AxiomReport> {
    Law::ALL
        .into_iter()
        .map(|l| check_law(cat, l, samples, seed))
        .collect()
}
