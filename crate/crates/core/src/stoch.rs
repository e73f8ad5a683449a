//! Substochastic kernels between finite spaces.
//!
//! With the powerset σ-algebra a kernel is determined by its point masses, so
//! a morphism `X → Y` is a `|X| × |Y|` matrix with nonnegative entries and row
//! sums at most one. Composition integrates (matrix product), identities are
//! point measures, tensor is disjoint union (block diagonal), and the trace
//! sums the mass exiting after every number of feedback traversals.

use nalgebra::DMatrix;
use rand::Rng;

use crate::category::{check_composable, trace_split, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::ObjectExpr;

/// Slack allowed on row sums when validating kernels.
pub const ROW_SUM_SLACK: f64 = 1e-12;
/// Default absolute tolerance for comparing kernels.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;
/// Pivot magnitude below which `I - F_UU` is treated as singular.
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SubstochMatrix {
    dom: ObjectExpr,
    cod: ObjectExpr,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Morphism for SubstochMatrix {
    fn dom(&self) -> &ObjectExpr {
        &self.dom
    }
    fn cod(&self) -> &ObjectExpr {
        &self.cod
    }
}

impl SubstochMatrix {
    /// Validates nonnegativity and row mass `≤ 1 + 1e-12`.
    pub fn new(dom: ObjectExpr, cod: ObjectExpr, data: Vec<f64>) -> Result<Self> {
        let (rows, cols) = (dom.union_size(), cod.union_size());
        if data.len() != rows * cols {
            return Err(Error::Validation(format!(
                "kernel needs {rows}x{cols} entries, got {}",
                data.len()
            )));
        }
        let m = SubstochMatrix {
            dom,
            cod,
            rows,
            cols,
            data,
        };
        for i in 0..rows {
            let row = m.row(i);
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::Validation(format!("row {i} has invalid entry {v}")));
            }
            let s: f64 = row.iter().sum();
            if s > 1.0 + ROW_SUM_SLACK {
                return Err(Error::Validation(format!("row {i} has mass {s} > 1")));
            }
        }
        Ok(m)
    }

    pub fn from_rows(dom: ObjectExpr, cod: ObjectExpr, rows: &[Vec<f64>]) -> Result<Self> {
        let cols = cod.union_size();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Validation(format!("every row needs {cols} entries")));
        }
        Self::new(dom, cod, rows.concat())
    }

    pub fn zeros(dom: ObjectExpr, cod: ObjectExpr) -> Self {
        let (rows, cols) = (dom.union_size(), cod.union_size());
        SubstochMatrix {
            dom,
            cod,
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row_mass(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    /// Largest entrywise difference; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &SubstochMatrix) -> f64 {
        if self.dom != other.dom || self.cod != other.cod {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `data` is trusted to be substochastic up to rounding.
    fn raw(dom: ObjectExpr, cod: ObjectExpr, data: Vec<f64>) -> Self {
        let (rows, cols) = (dom.union_size(), cod.union_size());
        debug_assert_eq!(data.len(), rows * cols);
        SubstochMatrix {
            dom,
            cod,
            rows,
            cols,
            data,
        }
    }
}

pub fn kern_compose(f: &SubstochMatrix, g: &SubstochMatrix) -> Result<SubstochMatrix> {
    check_composable(f, g)?;
    let (n, k, m) = (f.rows, f.cols, g.cols);
    let mut data = vec![0.0; n * m];
    for i in 0..n {
        for l in 0..k {
            let a = f.data[i * k + l];
            if a == 0.0 {
                continue;
            }
            for j in 0..m {
                data[i * m + j] += a * g.data[l * m + j];
            }
        }
    }
    Ok(SubstochMatrix::raw(f.dom.clone(), g.cod.clone(), data))
}

pub fn kern_tensor(f: &SubstochMatrix, g: &SubstochMatrix) -> SubstochMatrix {
    let dom = f.dom.tensor(&g.dom);
    let cod = f.cod.tensor(&g.cod);
    let cols = f.cols + g.cols;
    let mut data = vec![0.0; (f.rows + g.rows) * cols];
    for i in 0..f.rows {
        data[i * cols..i * cols + f.cols].copy_from_slice(f.row(i));
    }
    for i in 0..g.rows {
        let r = (f.rows + i) * cols + f.cols;
        data[r..r + g.cols].copy_from_slice(g.row(i));
    }
    SubstochMatrix::raw(dom, cod, data)
}

pub fn kern_permutation(a: &ObjectExpr, perm: &[usize]) -> Result<SubstochMatrix> {
    let map = a.union_permutation(perm)?;
    let n = map.len();
    let mut data = vec![0.0; n * n];
    for (i, j) in map.into_iter().enumerate() {
        data[i * n + j] = 1.0;
    }
    Ok(SubstochMatrix::raw(a.clone(), a.permuted(perm)?, data))
}

/// The four blocks of `f : A ⊗ U → B ⊗ U`.
struct Blocks {
    na: usize,
    nb: usize,
    nu: usize,
}

impl Blocks {
    fn new(f: &SubstochMatrix, u: &ObjectExpr) -> Result<(Self, ObjectExpr, ObjectExpr)> {
        let (a, b) = trace_split(f, u)?;
        let blocks = Blocks {
            na: a.union_size(),
            nb: b.union_size(),
            nu: u.union_size(),
        };
        Ok((blocks, a, b))
    }
}

/// Which feedback states can still route mass out to `B`.
/// Mass on the other states never exits and is discarded by the series.
fn live_states(f: &SubstochMatrix, bl: &Blocks) -> Vec<bool> {
    let mut live: Vec<bool> = (0..bl.nu)
        .map(|w| f.row(bl.na + w)[..bl.nb].iter().any(|&v| v > 0.0))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for w in 0..bl.nu {
            if live[w] {
                continue;
            }
            let row = &f.row(bl.na + w)[bl.nb..];
            if row.iter().zip(&live).any(|(&v, &l)| v > 0.0 && l) {
                live[w] = true;
                changed = true;
            }
        }
    }
    live
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            epsilon: 1e-12,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutcome {
    pub kernel: SubstochMatrix,
    /// Largest number of loop traversals summed for any input row.
    pub iterations: usize,
}

/// Trace by summing over paths. For each input `x`, `μ₀ = F_XU[x]` and
/// `μ_{k+1} = μ_k · F_UU`; the `k`-th term `μ_k · F_UY` is the mass exiting
/// after exactly `k` traversals. Summation stops once the residual mass that
/// can still exit drops below `epsilon`.
pub fn kern_trace_series_with(
    f: &SubstochMatrix,
    u: &ObjectExpr,
    opts: &SeriesOptions,
) -> Result<SeriesOutcome> {
    if opts.epsilon.is_nan() || opts.epsilon <= 0.0 {
        return Err(Error::Validation("epsilon must be positive".into()));
    }
    let (bl, a, b) = Blocks::new(f, u)?;
    let live = live_states(f, &bl);
    let mut data = vec![0.0; bl.na * bl.nb];
    let mut max_iters = 0;
    let mut mu = vec![0.0; bl.nu];
    let mut next = vec![0.0; bl.nu];
    for x in 0..bl.na {
        let row = f.row(x);
        let out = &mut data[x * bl.nb..(x + 1) * bl.nb];
        out.copy_from_slice(&row[..bl.nb]);
        for (w, m) in mu.iter_mut().enumerate() {
            *m = if live[w] { row[bl.nb + w] } else { 0.0 };
        }
        let mut iters = 0;
        loop {
            let residual: f64 = mu.iter().sum();
            if residual < opts.epsilon {
                break;
            }
            if iters >= opts.max_iterations {
                return Err(Error::Divergence {
                    iterations: iters,
                    residual,
                });
            }
            next.iter_mut().for_each(|v| *v = 0.0);
            for (w, &m) in mu.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let frow = f.row(bl.na + w);
                for (o, &p) in out.iter_mut().zip(&frow[..bl.nb]) {
                    *o += m * p;
                }
                for (v, (&p, &l)) in next.iter_mut().zip(frow[bl.nb..].iter().zip(&live)) {
                    if l {
                        *v += m * p;
                    }
                }
            }
            std::mem::swap(&mut mu, &mut next);
            iters += 1;
        }
        max_iters = max_iters.max(iters);
    }
    Ok(SeriesOutcome {
        kernel: SubstochMatrix::raw(a, b, data),
        iterations: max_iters,
    })
}

pub fn kern_trace_series(f: &SubstochMatrix, u: &ObjectExpr, epsilon: f64) -> Result<SubstochMatrix> {
    let opts = SeriesOptions {
        epsilon,
        ..SeriesOptions::default()
    };
    kern_trace_series_with(f, u, &opts).map(|o| o.kernel)
}

/// Closed form `F_XY + F_XU (I - F_UU)⁻¹ F_UY`, via an LU solve.
pub fn kern_trace_exact(f: &SubstochMatrix, u: &ObjectExpr) -> Result<SubstochMatrix> {
    let (bl, a, b) = Blocks::new(f, u)?;
    let mut data = vec![0.0; bl.na * bl.nb];
    for x in 0..bl.na {
        data[x * bl.nb..(x + 1) * bl.nb].copy_from_slice(&f.row(x)[..bl.nb]);
    }
    if bl.nu == 0 || bl.na == 0 {
        return Ok(SubstochMatrix::raw(a, b, data));
    }
    let system = DMatrix::from_fn(bl.nu, bl.nu, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - f.get(bl.na + i, bl.nb + j)
    });
    let exits = DMatrix::from_fn(bl.nu, bl.nb, |i, j| f.get(bl.na + i, j));
    let lu = system.lu();
    if lu.u().diagonal().iter().any(|p| p.abs() < PIVOT_EPS) {
        return Err(Error::Singular);
    }
    let z = lu.solve(&exits).ok_or(Error::Singular)?;
    for x in 0..bl.na {
        for w in 0..bl.nu {
            let p = f.get(x, bl.nb + w);
            if p == 0.0 {
                continue;
            }
            for y in 0..bl.nb {
                data[x * bl.nb + y] += p * z[(w, y)];
            }
        }
    }
    // The solve can leave tiny negative round-off.
    for v in &mut data {
        if *v < 0.0 && *v > -1e-12 {
            *v = 0.0;
        }
    }
    Ok(SubstochMatrix::raw(a, b, data))
}

/// Kernels over finite spaces. `tolerance` is the absolute entrywise
/// tolerance used by `equal`.
#[derive(Debug, Clone, Copy)]
pub struct Stoch {
    pub tolerance: f64,
    pub series: SeriesOptions,
}

impl Default for Stoch {
    fn default() -> Self {
        Stoch {
            tolerance: DEFAULT_TOLERANCE,
            series: SeriesOptions::default(),
        }
    }
}

impl TracedCategory for Stoch {
    type Mor = SubstochMatrix;

    fn name(&self) -> &'static str {
        "stoch"
    }

    fn compose(&self, f: &SubstochMatrix, g: &SubstochMatrix) -> Result<SubstochMatrix> {
        kern_compose(f, g)
    }

    fn tensor(&self, f: &SubstochMatrix, g: &SubstochMatrix) -> Result<SubstochMatrix> {
        Ok(kern_tensor(f, g))
    }

    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<SubstochMatrix> {
        kern_permutation(a, perm)
    }

    /// Exact solve, falling back to the path series when `I - F_UU` is singular.
    fn trace(&self, f: &SubstochMatrix, u: &ObjectExpr) -> Result<SubstochMatrix> {
        match kern_trace_exact(f, u) {
            Err(Error::Singular) => kern_trace_series_with(f, u, &self.series).map(|o| o.kernel),
            other => other,
        }
    }

    fn equal(&self, f: &SubstochMatrix, g: &SubstochMatrix) -> bool {
        f.max_abs_diff(g) <= self.tolerance
    }

    /// Rows: exponential weights normalised to a distribution, then scaled by
    /// a leak factor drawn uniformly from `[0.5, 1]`.
    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> SubstochMatrix {
        let (n, m) = (a.union_size(), b.union_size());
        let mut data = Vec::with_capacity(n * m);
        for _ in 0..n {
            let w: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let leak = rng.gen_range(0.5..=1.0);
            data.extend(w.iter().map(|v| if total > 0.0 { leak * v / total } else { 0.0 }));
        }
        SubstochMatrix::raw(a.clone(), b.clone(), data)
    }

    fn describe(&self, f: &SubstochMatrix) -> String {
        let rows: Vec<String> = (0..f.rows)
            .map(|i| {
                let r: Vec<String> = f.row(i).iter().map(|v| format!("{v:.6}")).collect();
                format!("[{}]", r.join(" "))
            })
            .collect();
        format!("{} -> {} {}", f.dom, f.cod, rows.join(""))
    }
}
