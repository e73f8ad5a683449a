//! Behavioural equivalence of transducers by partition refinement.
//!
//! States are equivalent iff, for every input, both are undefined, or both
//! are defined with equal outputs and equivalent successors. For
//! deterministic machines this is the kernel of the map into the final
//! coalgebra of resumptions, so it decides equality of unfoldings.

use std::collections::{HashMap, VecDeque};

use super::Transducer;
use crate::error::{Error, Result};

/// Per input: the output and successor class, if defined.
type Signature = Vec<Option<(usize, usize)>>;

/// Coarsest stable partition of the states of `t`, as a class id per state.
/// Class ids are assigned in order of first appearance.
pub fn refine(t: &Transducer) -> Vec<usize> {
    let nq = t.num_states();
    let nx = t.input.union_size();
    let mut class = vec![0usize; nq];
    let mut count = usize::MAX;
    // Moore refinement: split by (current class, per-input (output, successor class)).
    // The first round has every state in one class, so it splits by outputs alone.
    loop {
        let mut ids: HashMap<(usize, Signature), usize> = HashMap::new();
        let next: Vec<usize> = (0..nq)
            .map(|q| {
                let sig: Vec<_> = (0..nx)
                    .map(|x| t.step(q, x).map(|(y, q2)| (y, class[q2])))
                    .collect();
                let n = ids.len();
                *ids.entry((class[q], sig)).or_insert(n)
            })
            .collect();
        let new_count = ids.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

/// Disjoint union of two machines over the same alphabets; `g`'s states are
/// shifted by `|Q_f|`.
fn disjoint_union(f: &Transducer, g: &Transducer) -> Transducer {
    let nf = f.num_states();
    let mut states: Vec<String> = f.states.iter().map(|s| format!("l.{s}")).collect();
    states.extend(g.states.iter().map(|s| format!("r.{s}")));
    let mut delta = f.delta.clone();
    delta.extend(g.delta.iter().map(|t| t.map(|(y, q)| (y, q + nf))));
    Transducer {
        input: f.input.clone(),
        output: f.output.clone(),
        states,
        initial: f.initial,
        delta,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimResult {
    pub equivalent: bool,
    /// A shortest input word on which the two machines differ.
    pub witness: Option<Vec<usize>>,
}

pub fn bisim_equiv(f: &Transducer, g: &Transducer) -> Result<BisimResult> {
    if f.input != g.input || f.output != g.output {
        return Err(Error::Shape(format!(
            "cannot compare {} -> {} with {} -> {}",
            f.input, f.output, g.input, g.output
        )));
    }
    let u = disjoint_union(f, g);
    let class = refine(&u);
    if class[f.initial] == class[f.num_states() + g.initial] {
        return Ok(BisimResult {
            equivalent: true,
            witness: None,
        });
    }
    Ok(BisimResult {
        equivalent: false,
        witness: Some(shortest_witness(f, g)),
    })
}

/// Breadth-first search over state pairs for the first input on which the
/// machines disagree (definedness or output). Only called on inequivalent
/// pairs, where such a word exists.
fn shortest_witness(f: &Transducer, g: &Transducer) -> Vec<usize> {
    let nx = f.input.union_size();
    let start = (f.initial, g.initial);
    let mut parent: HashMap<(usize, usize), ((usize, usize), usize)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = std::collections::HashSet::from([start]);
    let word_to = |parent: &HashMap<_, _>, mut node: (usize, usize)| {
        let mut w = Vec::new();
        while node != start {
            let (prev, x) = parent[&node];
            w.push(x);
            node = prev;
        }
        w.reverse();
        w
    };
    while let Some((p, q)) = queue.pop_front() {
        for x in 0..nx {
            match (f.step(p, x), g.step(q, x)) {
                (None, None) => {}
                (Some((y1, p2)), Some((y2, q2))) if y1 == y2 => {
                    if seen.insert((p2, q2)) {
                        parent.insert((p2, q2), ((p, q), x));
                        queue.push_back((p2, q2));
                    }
                }
                _ => {
                    let mut w = word_to(&parent, (p, q));
                    w.push(x);
                    return w;
                }
            }
        }
    }
    unreachable!("inequivalent machines always have a distinguishing word")
}

/// The reachable quotient by bisimilarity. States are numbered in
/// breadth-first order from the initial state and named after the first
/// state of their class met in that order.
pub fn minimize(t: &Transducer) -> Transducer {
    let p = t.prune();
    let class = refine(&p);
    let nclasses = class.iter().copied().max().map_or(0, |m| m + 1);
    // `p` is in BFS order, so the first member of each class is its representative.
    let mut rep = vec![usize::MAX; nclasses];
    for (q, &c) in class.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = q;
        }
    }
    let nx = p.input.union_size();
    let quotient = Transducer {
        input: p.input.clone(),
        output: p.output.clone(),
        states: rep.iter().map(|&q| p.states[q].clone()).collect(),
        initial: class[p.initial],
        delta: rep
            .iter()
            .flat_map(|&q| (0..nx).map(move |x| (q, x)))
            .map(|(q, x)| p.step(q, x).map(|(y, q2)| (y, class[q2])))
            .collect(),
    };
    quotient.prune()
}

#[cfg(test)]
mod tests {
    use super::super::tests::{alternator, copycat, xa};
    use super::*;
    use crate::object::{ObjectExpr, Wire};

    /// Copycat on {a} spread over three states that all behave alike.
    fn copycat3() -> Transducer {
        Transducer::from_transitions(
            xa(),
            xa(),
            vec!["s0".into(), "s1".into(), "s2".into()],
            0,
            [(0, 0, 0, 1), (1, 0, 0, 2), (2, 0, 0, 0)],
        )
        .unwrap()
    }

    #[test]
    fn duplicated_state_is_equivalent() {
        let t = alternator();
        // q0 -> q1 -> q0' where q0' copies q0
        let dup = Transducer::from_transitions(
            xa(),
            t.output.clone(),
            vec!["q0".into(), "q1".into(), "q0'".into()],
            0,
            [(0, 0, 0, 1), (1, 0, 1, 2), (2, 0, 0, 1)],
        )
        .unwrap();
        let r = bisim_equiv(&t, &dup).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.witness, None);
    }

    #[test]
    fn reflexive() {
        assert!(bisim_equiv(&alternator(), &alternator()).unwrap().equivalent);
    }

    #[test]
    fn copycat_vs_alternator() {
        let bits: ObjectExpr = Wire::set("B", ["0", "1"]).unwrap().into();
        // copycat on a, outputs relabelled into bits: a ↦ 1 always
        let cc = Transducer::stateless(xa(), bits, [Some(1)]).unwrap();
        let r = bisim_equiv(&cc, &alternator()).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.witness, Some(vec![0]));
    }

    #[test]
    fn witness_is_shortest() {
        let bits: ObjectExpr = Wire::set("B", ["0", "1"]).unwrap().into();
        let zeros = Transducer::stateless(xa(), bits, [Some(0)]).unwrap();
        let r = bisim_equiv(&zeros, &alternator()).unwrap();
        assert_eq!(r.witness, Some(vec![0, 0]));
    }

    #[test]
    fn mismatched_objects() {
        assert!(bisim_equiv(&copycat(&xa()), &alternator()).is_err());
    }

    #[test]
    fn minimize_examples() {
        let m = minimize(&copycat3());
        assert_eq!(m.num_states(), 1);
        assert!(bisim_equiv(&m, &copycat3()).unwrap().equivalent);

        let m = minimize(&alternator());
        assert_eq!(m, alternator());

        let with_junk = Transducer::from_transitions(
            xa(),
            xa(),
            vec!["live".into(), "dead".into()],
            0,
            [(0, 0, 0, 0), (1, 0, 0, 0)],
        )
        .unwrap();
        assert_eq!(minimize(&with_junk).states(), &["live".to_string()]);
    }
}
