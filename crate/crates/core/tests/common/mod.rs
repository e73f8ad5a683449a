//! Helpers shared by the integration tests and the acceptance gate.
#![allow(dead_code)]

pub mod golden;
pub mod oracles;

use std::collections::BTreeSet;

use rand::Rng;
use tracecat::category::SampleRng;
use tracecat::games::{hide, interleaving_ok, restrict_left, restrict_right, Move, Play, PlaySet};
use tracecat::int::{GMorphism, GObject, Int};
use tracecat::object::{ObjectExpr, Wire};
use tracecat::transducer::{Resumptions, Transducer};

/// A wire of 1–2 labels, or the unit a third of the time.
pub fn small_object(rng: &mut SampleRng, name: &str) -> ObjectExpr {
    if rng.gen_ratio(1, 3) {
        return ObjectExpr::unit();
    }
    let n = rng.gen_range(1..=2);
    let labels: Vec<String> = (0..n).map(|i| format!("{}{i}", name.to_lowercase())).collect();
    Wire::set(name, labels).unwrap().into()
}

pub fn small_gobject(rng: &mut SampleRng, name: &str) -> GObject {
    GObject::new(
        small_object(rng, &format!("{name}p")),
        small_object(rng, &format!("{name}m")),
    )
}

/// Random composable transducer strategies `f : A → B`, `g : B → C`.
pub fn sample_g_pair(
    rng: &mut SampleRng,
    max_states: usize,
) -> (GMorphism<Transducer>, GMorphism<Transducer>) {
    let g = Int::new(Resumptions { max_states });
    let (a, b, c) = (
        small_gobject(rng, "A"),
        small_gobject(rng, "B"),
        small_gobject(rng, "C"),
    );
    (g.sample(&a, &b, rng), g.sample(&b, &c, rng))
}

fn is_prefix_of_some(set: &PlaySet, p: &[Move]) -> bool {
    set.plays()
        .range(p.to_vec()..)
        .next()
        .is_some_and(|q| q.starts_with(p))
}

/// `{ s↾X,Z | s ∈ L(X,Y,Z), s↾X,Y ∈ S, s↾Y,Z ∈ T }` by brute force over
/// interleavings, keeping plays of at most `depth` visible pairs.
pub fn literal_par_hide(s: &PlaySet, t: &PlaySet, depth: usize) -> BTreeSet<Play> {
    let mut alphabet: BTreeSet<Move> = BTreeSet::new();
    for p in s.plays() {
        alphabet.extend(p.iter().cloned());
    }
    for p in t.plays() {
        for m in p {
            alphabet.insert(match m.component {
                1 => Move::new(2, m.polarity.flip(), m.label.clone()),
                _ => Move::new(3, m.polarity, m.label.clone()),
            });
        }
    }
    let alphabet: Vec<Move> = alphabet.into_iter().collect();
    let mut out = BTreeSet::new();
    let mut stack: Vec<Play> = vec![Vec::new()];
    while let Some(cur) = stack.pop() {
        if s.contains(&restrict_left(&cur)) && t.contains(&restrict_right(&cur)) {
            let h = hide(&cur);
            if h.len() <= 2 * depth {
                out.insert(h);
            }
        }
        for m in &alphabet {
            let mut next = cur.clone();
            next.push(m.clone());
            if interleaving_ok(&next)
                && hide(&next).len() <= 2 * depth
                && is_prefix_of_some(s, &restrict_left(&next))
                && is_prefix_of_some(t, &restrict_right(&next))
            {
                stack.push(next);
            }
        }
    }
    out
}
