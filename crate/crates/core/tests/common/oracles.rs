//! Brute-force reference implementations, independent of the library's
//! production algorithms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use tracecat::category::{Morphism, SampleRng};
use tracecat::finfun::{pfn::sample_pfn, pfn_trace, rel_trace, PfnTable, RelTable};
use tracecat::games::unfold_plays;
use tracecat::object::{ObjectExpr, Wire};
use tracecat::stoch::{kern_trace_exact, kern_trace_series, SubstochMatrix};
use tracecat::transducer::{bisim_equiv, orbit, sample_transducer, Transducer};

/// A single wire named `name` with `n` elements `{prefix}0 …`.
pub fn wire(name: &str, n: usize) -> ObjectExpr {
    if n == 0 {
        return ObjectExpr::unit();
    }
    let prefix = name.to_lowercase();
    Wire::set(name, (0..n).map(|i| format!("{prefix}{i}")))
        .unwrap()
        .into()
}

/// `Tr(f)` for `f : A ⊗ U → B ⊗ U` by enumerating every path
/// `x → u₀ → … → u_{k-1} → y` with `k ≤ |U|`, repeats allowed.
pub fn rel_trace_by_paths(f: &RelTable, na: usize, nb: usize) -> BTreeSet<(usize, usize)> {
    let nu = f.cod().union_size() - nb;
    let mut out = BTreeSet::new();
    fn walk(
        f: &RelTable,
        (na, nb, nu): (usize, usize, usize),
        x: usize,
        at: usize,
        steps: usize,
        out: &mut BTreeSet<(usize, usize)>,
    ) {
        for &y in f.image(at) {
            if y < nb {
                out.insert((x, y));
            } else if steps < nu {
                walk(f, (na, nb, nu), x, na + (y - nb), steps + 1, out);
            }
        }
    }
    for x in 0..na {
        walk(f, (na, nb, nu), x, x, 0, &mut out);
    }
    out
}

/// `Tr(f) = ⋁ₖ fₖ` with `f₀ = F_AB` and `fₖ₊₁ = F_AU ; F_UUᵏ ; F_UB`, each
/// term composed as a partial-function table. Terms beyond `k = |U|` can
/// only revisit a feedback element, so they are never defined.
pub fn pfn_trace_by_terms(f: &PfnTable, na: usize, nb: usize) -> Vec<Option<usize>> {
    let nu = f.cod().union_size() - nb;
    let block = |rows: std::ops::Range<usize>, exit: bool| -> Vec<Option<usize>> {
        rows.map(|i| match f.apply(i) {
            Some(y) if exit && y < nb => Some(y),
            Some(y) if !exit && y >= nb => Some(y - nb),
            _ => None,
        })
        .collect()
    };
    let (f_ab, f_au) = (block(0..na, true), block(0..na, false));
    let (f_ub, f_uu) = (block(na..na + nu, true), block(na..na + nu, false));
    let then = |p: &[Option<usize>], q: &[Option<usize>]| -> Vec<Option<usize>> {
        p.iter().map(|y| y.and_then(|y| q[y])).collect()
    };
    let mut result = f_ab;
    let mut walk = f_au; // F_AU ; F_UUᵏ
    for _ in 0..=nu {
        for (r, t) in result.iter_mut().zip(then(&walk, &f_ub)) {
            if let Some(t) = t {
                assert!(r.is_none(), "a deterministic map has at most one exiting path");
                *r = Some(t);
            }
        }
        walk = then(&walk, &f_uu);
    }
    result
}

/// A machine bisimilar to `t` built by splitting every state into two
/// copies, wiring each transition to a random copy of its target and
/// shuffling the state order.
pub fn scrambled_copy(t: &Transducer, rng: &mut SampleRng) -> Transducer {
    let n = t.num_states();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.shuffle(rng);
    // copy c of state q is new state order[2q + c]
    let states: Vec<String> = (0..2 * n).map(|i| format!("s{i}")).collect();
    let mut transitions = Vec::new();
    for (q, x, y, q2) in t.transitions() {
        for c in 0..2 {
            let target = order[2 * q2 + rng.gen_range(0..2)];
            transitions.push((order[2 * q + c], x, y, target));
        }
    }
    let initial = order[2 * t.initial() + rng.gen_range(0..2)];
    Transducer::from_transitions(t.dom().clone(), t.cod().clone(), states, initial, transitions).unwrap()
}

/// Outcome of one oracle comparison; `Err` carries a description of the
/// counterexample.
pub type Check = Result<(), String>;

/// A feedback object with `nu` elements over one or two wires.
pub fn feedback_object(nu: usize, rng: &mut SampleRng) -> ObjectExpr {
    if nu >= 2 && rng.gen_bool(0.5) {
        let k = rng.gen_range(1..nu);
        wire("U", k).tensor(&wire("V", nu - k))
    } else {
        wire("U", nu)
    }
}

/// `rel_trace` against [`rel_trace_by_paths`] for a random relation with
/// `nu` feedback elements.
pub fn rel_case(nu: usize, rng: &mut SampleRng) -> Check {
    let (na, nb) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
    let (a, b, u) = (wire("A", na), wire("B", nb), feedback_object(nu, rng));
    let (dom, cod) = (a.tensor(&u), b.tensor(&u));
    let density = rng.gen_range(0.05..0.6);
    let pairs: Vec<(usize, usize)> = (0..dom.union_size())
        .flat_map(|x| (0..cod.union_size()).map(move |y| (x, y)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let f = RelTable::from_pairs(dom, cod, pairs).unwrap();
    let got: BTreeSet<_> = rel_trace(&f, &u).map_err(|e| e.to_string())?.pairs().collect();
    let want = rel_trace_by_paths(&f, na, nb);
    if got == want {
        Ok(())
    } else {
        Err(format!(
            "rel_trace {got:?} but paths give {want:?} for {:?}",
            f.pairs().collect::<Vec<_>>()
        ))
    }
}

/// `pfn_trace` against the per-term formula, and its graph against
/// `rel_trace` of the graph.
pub fn pfn_case(rng: &mut SampleRng) -> Check {
    let (na, nb, nu) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=6));
    let (a, b, u) = (wire("A", na), wire("B", nb), feedback_object(nu, rng));
    let f = sample_pfn(&a.tensor(&u), &b.tensor(&u), rng);
    let t = pfn_trace(&f, &u).map_err(|e| e.to_string())?;
    let terms = pfn_trace_by_terms(&f, na, nb);
    if t.table() != terms.as_slice() {
        return Err(format!(
            "pfn_trace {:?} but terms give {terms:?} for {:?}",
            t.table(),
            f.table()
        ));
    }
    let via_rel = rel_trace(&RelTable::graph(&f), &u).map_err(|e| e.to_string())?;
    if RelTable::graph(&t) != via_rel {
        return Err(format!(
            "graph of pfn_trace differs from rel_trace for {:?}",
            f.table()
        ));
    }
    Ok(())
}

/// A kernel with each entry zero with probability 0.4 and row mass 1 a
/// fifth of the time (else in `[0.5, 1)`), so closed feedback classes occur.
pub fn sparse_kernel(a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> SubstochMatrix {
    let m = b.union_size();
    let mut data = Vec::new();
    for _ in 0..a.union_size() {
        let w: Vec<f64> = (0..m)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    0.0
                } else {
                    rng.gen_range(0.01..1.0)
                }
            })
            .collect();
        let total: f64 = w.iter().sum();
        let mass = if rng.gen_bool(0.2) {
            1.0
        } else {
            rng.gen_range(0.5..1.0)
        };
        data.extend(w.iter().map(|v| if total > 0.0 { mass * v / total } else { 0.0 }));
    }
    SubstochMatrix::new(a.clone(), b.clone(), data).unwrap()
}

/// Series (ε = 1e-12) against the exact solve within 1e-9, with partial
/// sums nondecreasing in ε and bounded by the exact value. Returns
/// `Ok(false)` when `I - F_UU` is singular and there is nothing to compare.
pub fn stoch_case(rng: &mut SampleRng) -> Result<bool, String> {
    let (na, nb, nu) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=4));
    let (a, b, u) = (wire("A", na), wire("B", nb), feedback_object(nu, rng));
    let f = sparse_kernel(&a.tensor(&u), &b.tensor(&u), rng);
    let exact = match kern_trace_exact(&f, &u) {
        Ok(k) => k,
        Err(tracecat::error::Error::Singular) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    let mut prev: Option<SubstochMatrix> = None;
    for eps in [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
        let s = kern_trace_series(&f, &u, eps).map_err(|e| e.to_string())?;
        for i in 0..na {
            for j in 0..nb {
                if s.get(i, j) > exact.get(i, j) + 1e-12 {
                    return Err(format!("partial sum at ε={eps} exceeds exact at ({i},{j})"));
                }
                if prev.as_ref().is_some_and(|p| p.get(i, j) > s.get(i, j)) {
                    return Err(format!("partial sums decrease at ε={eps}, ({i},{j})"));
                }
            }
        }
        prev = Some(s);
    }
    let d = prev.unwrap().max_abs_diff(&exact);
    if d <= 1e-9 {
        Ok(true)
    } else {
        Err(format!("series and exact differ by {d:e}"))
    }
}

/// `bisim_equiv(f, g)` against equality of play sets at depth `|Q_f|·|Q_g|`.
/// `g` is a scrambled copy of `f`, a one-transition mutation, or independent.
/// Returns whether the pair was equivalent.
pub fn bisim_case(rng: &mut SampleRng) -> Result<bool, String> {
    let (a, b) = (wire("A", rng.gen_range(1..=2)), wire("B", rng.gen_range(1..=2)));
    let (f, g) = match rng.gen_range(0..3) {
        0 => {
            let f = sample_transducer(&a, &b, 2, rng);
            let g = scrambled_copy(&f, rng);
            (f, g)
        }
        1 => {
            let f = sample_transducer(&a, &b, 3, rng);
            let g = mutated(&f, rng);
            (f, g)
        }
        _ => (
            sample_transducer(&a, &b, 3, rng),
            sample_transducer(&a, &b, 3, rng),
        ),
    };
    let r = bisim_equiv(&f, &g).map_err(|e| e.to_string())?;
    let depth = f.num_states() * g.num_states();
    let same_plays = unfold_plays(&f, depth) == unfold_plays(&g, depth);
    if r.equivalent != same_plays {
        return Err(format!(
            "bisim says {} but plays at depth {depth} say {same_plays}:\n{f:?}\n{g:?}",
            r.equivalent
        ));
    }
    if let Some(w) = &r.witness {
        let (of, og) = (orbit(&f, w), orbit(&g, w));
        if (of.steps.clone(), of.halted) == (og.steps.clone(), og.halted) {
            return Err(format!("witness {w:?} does not separate the machines"));
        }
    }
    Ok(r.equivalent)
}

/// `t` with one transition redirected, re-labelled or removed.
pub fn mutated(t: &Transducer, rng: &mut SampleRng) -> Transducer {
    let (nq, ny) = (t.num_states(), t.cod().union_size());
    let mut tr: Vec<_> = t.transitions().collect();
    if tr.is_empty() {
        return t.clone();
    }
    let i = rng.gen_range(0..tr.len());
    match rng.gen_range(0..3) {
        0 => tr[i].2 = rng.gen_range(0..ny),
        1 => tr[i].3 = rng.gen_range(0..nq),
        _ => {
            tr.remove(i);
        }
    }
    Transducer::from_transitions(
        t.dom().clone(),
        t.cod().clone(),
        t.states().to_vec(),
        t.initial(),
        tr,
    )
    .unwrap()
}
