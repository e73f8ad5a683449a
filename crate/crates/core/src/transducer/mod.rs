//! Finite-state transducers as finite presentations of resumptions.
//!
//! A transducer `(Q, X, Y, q₀, δ)` with `δ : Q × X ⇀ Y × Q` unfolds into a
//! resumption; two transducers denote the same resumption exactly when their
//! initial states are bisimilar, so `equal` is decided by partition
//! refinement (see [`bisim`]).

pub mod bisim;

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use crate::category::{check_composable, trace_split, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::ObjectExpr;

pub use bisim::{bisim_equiv, minimize, BisimResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    input: ObjectExpr,
    output: ObjectExpr,
    states: Vec<String>,
    initial: usize,
    /// `delta[q * |X| + x]`
    delta: Vec<Option<(usize, usize)>>,
}

impl Morphism for Transducer {
    fn dom(&self) -> &ObjectExpr {
        &self.input
    }
    fn cod(&self) -> &ObjectExpr {
        &self.output
    }
}

impl Transducer {
    pub fn new(
        input: ObjectExpr,
        output: ObjectExpr,
        states: Vec<String>,
        initial: usize,
        delta: Vec<Option<(usize, usize)>>,
    ) -> Result<Self> {
        let (nq, nx, ny) = (states.len(), input.union_size(), output.union_size());
        if initial >= nq {
            return Err(Error::Validation("initial state is not a state".into()));
        }
        if delta.len() != nq * nx {
            return Err(Error::Validation(format!(
                "transition table needs {} entries, got {}",
                nq * nx,
                delta.len()
            )));
        }
        if delta.iter().flatten().any(|&(y, q)| y >= ny || q >= nq) {
            return Err(Error::Validation(
                "transition leaves the declared states or outputs".into(),
            ));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::Validation(format!("duplicate state {s:?}")));
            }
        }
        Ok(Transducer {
            input,
            output,
            states,
            initial,
            delta,
        })
    }

    /// Builds from `(state, input, output, next)` transitions over named states.
    pub fn from_transitions(
        input: ObjectExpr,
        output: ObjectExpr,
        states: Vec<String>,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, usize, usize, usize)>,
    ) -> Result<Self> {
        let nx = input.union_size();
        let mut delta = vec![None; states.len() * nx];
        for (q, x, y, q2) in transitions {
            if x >= nx || q >= states.len() {
                return Err(Error::Validation(format!("transition ({q}, {x}) out of range")));
            }
            if delta[q * nx + x].is_some() {
                return Err(Error::Validation(format!(
                    "state {} has two transitions on {}",
                    states[q],
                    input.union_label(x)
                )));
            }
            delta[q * nx + x] = Some((y, q2));
        }
        Self::new(input, output, states, initial, delta)
    }

    /// A one-state machine from a partial function table.
    pub fn stateless(
        input: ObjectExpr,
        output: ObjectExpr,
        map: impl IntoIterator<Item = Option<usize>>,
    ) -> Result<Self> {
        let delta = map.into_iter().map(|y| y.map(|y| (y, 0))).collect();
        Self::new(input, output, vec!["q0".into()], 0, delta)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, x: usize) -> Option<(usize, usize)> {
        self.delta[q * self.input.union_size() + x]
    }

    /// Transitions as `(state, input, output, next)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let nx = self.input.union_size();
        self.delta
            .iter()
            .enumerate()
            .filter_map(move |(i, t)| t.map(|(y, q2)| (i / nx.max(1), i % nx.max(1), y, q2)))
    }

    /// Restricts to states reachable from the initial one, renumbered in
    /// breadth-first order so the initial state is state 0.
    pub fn prune(&self) -> Transducer {
        let nx = self.input.union_size();
        let mut index = vec![usize::MAX; self.states.len()];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for x in 0..nx {
                if let Some((_, q2)) = self.step(q, x) {
                    if index[q2] == usize::MAX {
                        index[q2] = order.len();
                        order.push(q2);
                    }
                }
            }
            i += 1;
        }
        let delta = order
            .iter()
            .flat_map(|&q| (0..nx).map(move |x| (q, x)))
            .map(|(q, x)| self.step(q, x).map(|(y, q2)| (y, index[q2])))
            .collect();
        Transducer {
            input: self.input.clone(),
            output: self.output.clone(),
            states: order.iter().map(|&q| self.states[q].clone()).collect(),
            initial: 0,
            delta,
        }
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Product-state construction over pairs reachable from `start`. `step`
/// gives, per pair and input, the output and the successor pair.
fn product_machine<F>(input: ObjectExpr, output: ObjectExpr, start: (usize, usize), mut step: F) -> Transducer
where
    F: FnMut((usize, usize), usize) -> Option<(usize, (usize, usize))>,
{
    let nx = input.union_size();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    index.insert(start, 0);
    let mut delta = Vec::new();
    while let Some(pair) = queue.pop_front() {
        for x in 0..nx {
            let t = step(pair, x).map(|(y, next)| {
                let n = index.len();
                let id = *index.entry(next).or_insert_with(|| {
                    queue.push_back(next);
                    n
                });
                (y, id)
            });
            delta.push(t);
        }
    }
    Transducer {
        input,
        output,
        states: numbered(index.len()),
        initial: 0,
        delta,
    }
}

/// Series composition: `f;g(x) = (z, f';g')` when `f(x) = (y, f')` and
/// `g(y) = (z, g')`.
pub fn td_compose(f: &Transducer, g: &Transducer) -> Result<Transducer> {
    check_composable(f, g)?;
    Ok(product_machine(
        f.input.clone(),
        g.output.clone(),
        (f.initial, g.initial),
        |(p, q), x| {
            let (y, p2) = f.step(p, x)?;
            let (z, q2) = g.step(q, y)?;
            Some((z, (p2, q2)))
        },
    ))
}

/// Asynchronous parallel composition: an input on a left wire steps `f` and
/// leaves `g` where it is, and symmetrically.
pub fn td_tensor(f: &Transducer, g: &Transducer) -> Transducer {
    let nxf = f.input.union_size();
    let nyf = f.output.union_size();
    product_machine(
        f.input.tensor(&g.input),
        f.output.tensor(&g.output),
        (f.initial, g.initial),
        |(p, q), x| {
            if x < nxf {
                let (y, p2) = f.step(p, x)?;
                Some((y, (p2, q)))
            } else {
                let (y, q2) = g.step(q, x - nxf)?;
                Some((nyf + y, (p, q2)))
            }
        },
    )
}

/// One step of a token through the feedback loop of `f : A ⊗ U → B ⊗ U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopStep {
    pub state: usize,
    pub feedback: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopExit {
    Exit { output: usize, state: usize },
    Stuck,
    Cycle,
}

/// Runs the token for input `a` from state `q`: U-outputs are fed back as
/// U-inputs until a B-output emerges. A repeated `(state, feedback element)`
/// configuration is a cycle, since the machine is deterministic.
pub fn circulate(f: &Transducer, na: usize, nb: usize, q: usize, a: usize) -> (Vec<LoopStep>, LoopExit) {
    let nu = f.output.union_size() - nb;
    let mut seen = vec![false; f.num_states() * nu];
    let mut path = Vec::new();
    let mut current = f.step(q, a);
    let exit = loop {
        match current {
            None => break LoopExit::Stuck,
            Some((y, q2)) if y < nb => break LoopExit::Exit { output: y, state: q2 },
            Some((y, q2)) => {
                let u = y - nb;
                if seen[q2 * nu + u] {
                    break LoopExit::Cycle;
                }
                seen[q2 * nu + u] = true;
                path.push(LoopStep {
                    state: q2,
                    feedback: u,
                });
                current = f.step(q2, na + u);
            }
        }
    };
    (path, exit)
}

/// Feedback over the suffix `u`; the state after the token exits is the
/// successor state.
pub fn td_trace(f: &Transducer, u: &ObjectExpr) -> Result<Transducer> {
    let (a, b) = trace_split(f, u)?;
    let (na, nb) = (a.union_size(), b.union_size());
    let delta = (0..f.num_states())
        .flat_map(|q| (0..na).map(move |x| (q, x)))
        .map(|(q, x)| match circulate(f, na, nb, q, x).1 {
            LoopExit::Exit { output, state } => Some((output, state)),
            _ => None,
        })
        .collect();
    let t = Transducer {
        input: a,
        output: b,
        states: f.states.clone(),
        initial: f.initial,
        delta,
    };
    Ok(t.prune())
}

pub fn td_permutation(a: &ObjectExpr, perm: &[usize]) -> Result<Transducer> {
    let map = a.union_permutation(perm)?;
    Transducer::stateless(a.clone(), a.permuted(perm)?, map.into_iter().map(Some))
}

/// A run of a transducer on a finite input word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// `q₀, q₁, …`; one more entry than `steps`.
    pub states: Vec<usize>,
    /// `(xᵢ, yᵢ)` pairs.
    pub steps: Vec<(usize, usize)>,
    /// Set when the run stopped at an undefined transition.
    pub halted: bool,
}

impl Orbit {
    pub fn outputs(&self) -> Vec<usize> {
        self.steps.iter().map(|&(_, y)| y).collect()
    }
}

pub fn orbit(t: &Transducer, inputs: &[usize]) -> Orbit {
    let mut q = t.initial;
    let mut states = vec![q];
    let mut steps = Vec::new();
    for &x in inputs {
        match t.step(q, x) {
            Some((y, q2)) => {
                steps.push((x, y));
                states.push(q2);
                q = q2;
            }
            None => {
                return Orbit {
                    states,
                    steps,
                    halted: true,
                }
            }
        }
    }
    Orbit {
        states,
        steps,
        halted: false,
    }
}

/// Random machine with `1..=max_states` states; each transition is
/// undefined with probability 1/4.
pub fn sample_transducer(
    a: &ObjectExpr,
    b: &ObjectExpr,
    max_states: usize,
    rng: &mut SampleRng,
) -> Transducer {
    let nq = rng.gen_range(1..=max_states.max(1));
    let (nx, ny) = (a.union_size(), b.union_size());
    let delta = (0..nq * nx)
        .map(|_| {
            if ny == 0 || rng.gen_bool(0.25) {
                None
            } else {
                Some((rng.gen_range(0..ny), rng.gen_range(0..nq)))
            }
        })
        .collect();
    Transducer {
        input: a.clone(),
        output: b.clone(),
        states: numbered(nq),
        initial: 0,
        delta,
    }
}

/// The category of resumptions, presented by finite transducers.
#[derive(Debug, Clone, Copy)]
pub struct Resumptions {
    pub max_states: usize,
}

impl Default for Resumptions {
    fn default() -> Self {
        Resumptions { max_states: 4 }
    }
}

impl TracedCategory for Resumptions {
    type Mor = Transducer;

    fn name(&self) -> &'static str {
        "transducer"
    }

    fn compose(&self, f: &Transducer, g: &Transducer) -> Result<Transducer> {
        td_compose(f, g)
    }

    fn tensor(&self, f: &Transducer, g: &Transducer) -> Result<Transducer> {
        Ok(td_tensor(f, g))
    }

    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<Transducer> {
        td_permutation(a, perm)
    }

    fn trace(&self, f: &Transducer, u: &ObjectExpr) -> Result<Transducer> {
        td_trace(f, u)
    }

    fn equal(&self, f: &Transducer, g: &Transducer) -> bool {
        bisim_equiv(f, g).map(|r| r.equivalent).unwrap_or(false)
    }

    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> Transducer {
        sample_transducer(a, b, self.max_states, rng)
    }

    fn describe(&self, f: &Transducer) -> String {
        let body: Vec<String> = f
            .transitions()
            .map(|(q, x, y, q2)| {
                format!(
                    "{} {}/{} {}",
                    f.states[q],
                    f.input.union_label(x),
                    f.output.union_label(y),
                    f.states[q2]
                )
            })
            .collect();
        format!(
            "{} -> {} init {} [{}]",
            f.input,
            f.output,
            f.states[f.initial],
            body.join("; ")
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::object::Wire;

    pub fn xa() -> ObjectExpr {
        Wire::set("X", ["a"]).unwrap().into()
    }
    pub fn bits() -> ObjectExpr {
        Wire::set("B", ["0", "1"]).unwrap().into()
    }

    /// q0 --a/0--> q1 --a/1--> q0
    pub fn alternator() -> Transducer {
        Transducer::from_transitions(
            xa(),
            bits(),
            vec!["q0".into(), "q1".into()],
            0,
            [(0, 0, 0, 1), (1, 0, 1, 0)],
        )
        .unwrap()
    }

    pub fn copycat(x: &ObjectExpr) -> Transducer {
        Resumptions::default().identity(x).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let ab: ObjectExpr = Wire::set("X", ["a", "b"]).unwrap().into();
        let id = copycat(&ab);
        let o = orbit(&id, &[0, 1]);
        assert_eq!(o.outputs(), vec![0, 1]);
        assert!(!o.halted);

        let stuck = Transducer::stateless(xa(), xa(), [None]).unwrap();
        let o = orbit(&stuck, &[0]);
        assert!(o.outputs().is_empty());
        assert!(o.halted);

        let o = orbit(&alternator(), &[0, 0, 0]);
        assert_eq!(o.outputs(), vec![0, 1, 0]);
        assert_eq!(o.states, vec![0, 1, 0, 1]);
    }

    #[test]
    fn compose_one_state_machines() {
        let y: ObjectExpr = Wire::set("Y", ["y"]).unwrap().into();
        let z: ObjectExpr = Wire::set("Z", ["z"]).unwrap().into();
        let f = Transducer::stateless(xa(), y.clone(), [Some(0)]).unwrap();
        let g = Transducer::stateless(y, z.clone(), [Some(0)]).unwrap();
        let h = td_compose(&f, &g).unwrap();
        assert_eq!(h.num_states(), 1);
        assert_eq!(h.step(0, 0), Some((0, 0)));
        assert!(td_compose(&f, &f).is_err());
    }

    #[test]
    fn compose_undefined_propagates() {
        let f = Transducer::stateless(xa(), xa(), [None]).unwrap();
        let h = td_compose(&f, &alternator()).unwrap();
        assert_eq!(h.step(0, 0), None);
    }

    #[test]
    fn tensor_runs_components_independently() {
        let ab: ObjectExpr = Wire::set("C", ["c"]).unwrap().into();
        let t = td_tensor(&alternator(), &copycat(&ab));
        // inputs: 0 = left a, 1 = right c; outputs: 0,1 = left bits, 2 = right c
        let o = orbit(&t, &[0, 1, 0, 1, 0]);
        assert_eq!(o.outputs(), vec![0, 2, 1, 2, 0]);

        let never = Transducer::stateless(ab.clone(), ab, [None]).unwrap();
        let t = td_tensor(&alternator(), &never);
        assert_eq!(t.step(0, 1), None);
        assert!(t.step(0, 0).is_some());
    }

    #[test]
    fn trace_examples() {
        let u: ObjectExpr = Wire::set("U", ["u"]).unwrap().into();
        let y: ObjectExpr = Wire::set("Y", ["b"]).unwrap().into();
        // inl a -> inr u, inr u -> inl b
        let f = Transducer::stateless(xa().tensor(&u), y.tensor(&u), [Some(1), Some(0)]).unwrap();
        let t = td_trace(&f, &u).unwrap();
        assert_eq!(t.step(0, 0), Some((0, 0)));

        // inr u -> inr u loops forever
        let f = Transducer::stateless(xa().tensor(&u), y.tensor(&u), [Some(1), Some(1)]).unwrap();
        assert_eq!(td_trace(&f, &u).unwrap().step(0, 0), None);

        let s = Resumptions::default().symmetry(&xa(), &xa()).unwrap();
        let t = td_trace(&s, &xa()).unwrap();
        assert!(bisim_equiv(&t, &copycat(&xa())).unwrap().equivalent);
    }

    #[test]
    fn prune_drops_unreachable() {
        let t = Transducer::from_transitions(
            xa(),
            xa(),
            vec!["a".into(), "b".into(), "c".into()],
            1,
            [(1, 0, 0, 1), (0, 0, 0, 2)],
        )
        .unwrap();
        let p = t.prune();
        assert_eq!(p.states(), &["b".to_string()]);
    }
}
