//! Parametrizations of unitaries and isometries, a restarted Nelder-Mead
//! direct search (basis searches) and restarted L-BFGS on the Stiefel
//! manifold (decomposition search).

use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, inner, norm_sqr, ComplexMatrix};
use crate::scalar::Real;
use crate::states::{derive_seed, seeded_rng};

/// `K^2` real parameters of a Hermitian generator `H`; the unitary is `exp(iH)`.
///
/// Layout: the `K` diagonal entries first, then `(re, im)` of each upper
/// off-diagonal entry in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams<T> {
    dim: usize,
    params: Vec<T>,
}

impl<T: Real> UnitaryParams<T> {
    pub fn new(dim: usize, params: Vec<T>) -> Result<Self> {
        if dim == 0 || params.len() != dim * dim {
            return Err(Error::InvalidParams(format!(
                "{} parameters for a {dim}x{dim} unitary",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, params })
    }

    pub fn param_count(dim: usize) -> usize {
        dim * dim
    }

    pub fn generator(&self) -> ComplexMatrix<T> {
        generator(self.dim, &self.params)
    }

    pub fn to_unitary(&self) -> ComplexMatrix<T> {
        unitary_from_slice(self.dim, &self.params)
    }
}

fn generator<T: Real>(dim: usize, p: &[T]) -> ComplexMatrix<T> {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex::new(p[i], T::zero());
    }
    let mut idx = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = Complex::new(p[idx], p[idx + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            idx += 2;
        }
    }
    h
}

/// `exp(iH)` through the eigendecomposition of the generator.
pub(crate) fn unitary_from_slice<T: Real>(dim: usize, p: &[T]) -> ComplexMatrix<T> {
    if p.iter().all(|x| x.is_zero()) {
        return ComplexMatrix::identity(dim);
    }
    let es = hermitian_eigensystem(&generator(dim, p)).expect("generator is Hermitian");
    let v = &es.vectors;
    let phases: Vec<Complex<T>> = es
        .values
        .iter()
        .map(|&l| Complex::new(l.cos(), l.sin()))
        .collect();
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        (0..dim)
            .map(|l| v[(i, l)] * phases[l] * v[(j, l)].conj())
            .sum()
    })
}

/// `2 L r` real parameters packing a complex `L x r` matrix.
///
/// The matrix `[1_r; 0] + Z(params)` is orthonormalized column by column, so
/// zero parameters give the leading columns of the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryParams<T> {
    rows: usize,
    cols: usize,
    params: Vec<T>,
}

impl<T: Real> IsometryParams<T> {
    pub fn new(rows: usize, cols: usize, params: Vec<T>) -> Result<Self> {
        if cols == 0 || rows < cols {
            return Err(Error::InvalidParams(format!(
                "isometry needs rows >= cols >= 1, got {rows}x{cols}"
            )));
        }
        if params.len() != Self::param_count(rows, cols) {
            return Err(Error::InvalidParams(format!(
                "{} parameters for a {rows}x{cols} isometry",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, params })
    }

    pub fn param_count(rows: usize, cols: usize) -> usize {
        2 * rows * cols
    }

    pub fn to_isometry(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_columns(&isometry_columns(self.rows, self.cols, &self.params))
    }
}

/// Orthonormal columns of the packed matrix (modified Gram-Schmidt).
pub(crate) fn isometry_columns<T: Real>(rows: usize, cols: usize, p: &[T]) -> Vec<Vec<Complex<T>>> {
    let mut out: Vec<Vec<Complex<T>>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut col: Vec<Complex<T>> = (0..rows)
            .map(|l| {
                let base = if l == c { T::one() } else { T::zero() };
                let k = 2 * (l * cols + c);
                Complex::new(base + p[k], p[k + 1])
            })
            .collect();
        if !orthonormalize_against(&mut col, &out) {
            // collapsed column: fall back to the first standard vector that survives
            for e in 0..rows {
                let mut unit = vec![Complex::zero(); rows];
                unit[e] = Complex::one();
                if orthonormalize_against(&mut unit, &out) {
                    col = unit;
                    break;
                }
            }
        }
        out.push(col);
    }
    out
}

fn orthonormalize_against<T: Real>(v: &mut [Complex<T>], basis: &[Vec<Complex<T>>]) -> bool {
    let scale = norm_sqr(v).sqrt();
    if scale == T::zero() {
        return false;
    }
    // two passes keep the columns orthogonal to working precision
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= y * proj;
            }
        }
    }
    let n = norm_sqr(v).sqrt();
    if n <= scale * T::lit(1e-8) {
        return false;
    }
    for x in v.iter_mut() {
        *x /= n;
    }
    true
}

/// Settings for the restarted direct search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Iterations per restart (per continuation stage on the Stiefel manifold).
    pub max_iters: usize,
    /// Convergence threshold on the spread of simplex values or on the
    /// Riemannian gradient norm.
    pub tol: f64,
    /// Initial simplex edge length.
    pub step: f64,
    /// Random starts are uniform in `[-start_spread, start_spread]` per coordinate.
    pub start_spread: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 2000,
            tol: 1e-9,
            step: 0.1,
            start_spread: PI,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 || !(self.tol > 0.0) || !(self.step > 0.0) {
            return Err(Error::InvalidParams(
                "optimizer restarts, iterations, tolerance and step must be positive".into(),
            ));
        }
        if !(self.start_spread >= 0.0) {
            return Err(Error::InvalidParams(
                "start spread must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OptimDiagnostics {
    pub restarts: usize,
    pub iterations: usize,
    pub evaluations: usize,
    /// Restarts whose final simplex met the tolerance.
    pub converged_restarts: usize,
    pub best_restart: usize,
}

impl OptimDiagnostics {
    pub fn merge(&mut self, other: &OptimDiagnostics) {
        self.restarts += other.restarts;
        self.iterations += other.iterations;
        self.evaluations += other.evaluations;
        self.converged_restarts += other.converged_restarts;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult<T> {
    pub value: T,
    pub params: Vec<T>,
    pub diagnostics: OptimDiagnostics,
}

/// Maximizes `objective` over `R^dim` from `cfg.restarts` starting points.
///
/// The first start is the origin, the others are drawn from seeds derived
/// from `cfg.seed`. Restarts run in parallel; the best value wins and ties
/// go to the lowest restart index, so the result does not depend on the
/// schedule.
pub fn maximize<T, F>(objective: F, dim: usize, cfg: &OptimizerConfig) -> OptimResult<T>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    let mut r = minimize(|x: &[T]| -objective(x), dim, cfg);
    r.value = -r.value;
    r
}

/// Minimizing counterpart of [`maximize`].
pub fn minimize<T, F>(objective: F, dim: usize, cfg: &OptimizerConfig) -> OptimResult<T>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    let restarts = cfg.restarts.max(1);
    let runs: Vec<RunOutcome<T>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start = starting_point(dim, r, cfg);
            run_restart(&objective, start, cfg)
        })
        .collect();

    let mut diagnostics = OptimDiagnostics {
        restarts,
        ..Default::default()
    };
    let mut best: Option<(usize, &RunOutcome<T>)> = None;
    for (i, run) in runs.iter().enumerate() {
        diagnostics.iterations += run.iterations;
        diagnostics.evaluations += run.evaluations;
        diagnostics.converged_restarts += usize::from(run.converged);
        match best {
            Some((_, b)) if !(run.value < b.value) => {}
            _ => best = Some((i, run)),
        }
    }
    let (idx, run) = best.expect("at least one restart");
    diagnostics.best_restart = idx;
    OptimResult {
        value: run.value,
        params: run.params.clone(),
        diagnostics,
    }
}

/// Result of [`minimize_stiefel`].
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelResult<T> {
    pub value: T,
    /// Minimizer with orthonormal columns.
    pub point: ComplexMatrix<T>,
    pub diagnostics: OptimDiagnostics,
}

/// Minimizes a smooth function over `rows x cols` matrices with orthonormal
/// columns by Riemannian L-BFGS.
///
/// `objective(V, mu)` returns the value and the Euclidean gradient
/// `2 df/d(conj V)`. Each restart runs through the `continuation` values of
/// `mu` in order, warm-starting every stage from the previous one; the final
/// value is the objective at the last `mu`. Restart 0 starts from the leading
/// identity columns, the others from random isometries. `cfg.max_iters` is the
/// iteration budget per stage and `cfg.tol` bounds the gradient norm.
/// `floor(mu)` is a known lower bound of the objective; a restart that reaches
/// it stops early.
pub fn minimize_stiefel<T, F, L>(
    objective: F,
    floor: L,
    rows: usize,
    cols: usize,
    continuation: &[T],
    cfg: &OptimizerConfig,
) -> StiefelResult<T>
where
    T: Real,
    F: Fn(&ComplexMatrix<T>, T) -> (T, ComplexMatrix<T>) + Sync,
    L: Fn(T) -> T + Sync,
{
    assert!(rows >= cols && cols > 0, "isometry needs rows >= cols >= 1");
    let stages: Vec<T> = if continuation.is_empty() {
        vec![T::zero()]
    } else {
        continuation.to_vec()
    };
    let restarts = cfg.restarts.max(1);
    let runs: Vec<RunOutcome<T>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut v = stiefel_start(rows, cols, r, cfg);
            let mut out = RunOutcome {
                value: T::infinity(),
                params: Vec::new(),
                iterations: 0,
                evaluations: 0,
                converged: false,
            };
            let last = stages.len() - 1;
            for (i, &mu) in stages.iter().enumerate() {
                // intermediate stages only need to land in the right basin
                let tol = T::lit(cfg.tol).max(mu * T::lit(1e-2));
                let ftol = mu * T::lit(1e-4);
                let stage = stiefel_lbfgs(&objective, v, mu, floor(mu), cfg.max_iters, tol, ftol);
                out.iterations += stage.iterations;
                out.evaluations += stage.evaluations;
                out.converged = stage.converged;
                out.value = stage.value;
                v = stage.point;
                if stage.at_floor && i < last {
                    let (value, _) = objective(&v, stages[last]);
                    out.evaluations += 1;
                    out.value = value;
                    break;
                }
            }
            out.params = v.as_slice().iter().flat_map(|z| [z.re, z.im]).collect();
            out
        })
        .collect();

    let mut diagnostics = OptimDiagnostics {
        restarts,
        ..Default::default()
    };
    let mut best: Option<(usize, &RunOutcome<T>)> = None;
    for (i, run) in runs.iter().enumerate() {
        diagnostics.iterations += run.iterations;
        diagnostics.evaluations += run.evaluations;
        diagnostics.converged_restarts += usize::from(run.converged);
        match best {
            Some((_, b)) if !(run.value < b.value) => {}
            _ => best = Some((i, run)),
        }
    }
    let (idx, run) = best.expect("at least one restart");
    diagnostics.best_restart = idx;
    let data = run
        .params
        .chunks(2)
        .map(|c| Complex::new(c[0], c[1]))
        .collect();
    StiefelResult {
        value: run.value,
        point: ComplexMatrix::from_row_major(rows, cols, data).expect("shape is consistent"),
        diagnostics,
    }
}

fn stiefel_start<T: Real>(
    rows: usize,
    cols: usize,
    restart: usize,
    cfg: &OptimizerConfig,
) -> ComplexMatrix<T> {
    if restart == 0 {
        return ComplexMatrix::from_fn(rows, cols, |i, j| {
            if i == j {
                Complex::one()
            } else {
                Complex::zero()
            }
        });
    }
    let mut rng = seeded_rng(derive_seed(cfg.seed, restart as u64));
    let raw: Vec<T> = (0..2 * rows * cols)
        .map(|_| T::lit(rng.random_range(-1.0..=1.0)))
        .collect();
    // the packed layout adds the identity; cancel it for an unbiased start
    let mut p = raw;
    for c in 0..cols {
        p[2 * (c * cols + c)] -= T::one();
    }
    ComplexMatrix::from_columns(&isometry_columns(rows, cols, &p))
}

fn re_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

/// Projection onto the tangent space at `v`: `G - V sym(V^dagger G)`.
fn tangent<T: Real>(v: &ComplexMatrix<T>, g: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let vg = &v.adjoint() * g;
    let sym = (&vg + &vg.adjoint()).scale(T::lit(0.5));
    g - &(v * &sym)
}

fn retract<T: Real>(v: &ComplexMatrix<T>, d: &ComplexMatrix<T>, t: T) -> ComplexMatrix<T> {
    let moved = v + &d.scale(t);
    let (rows, cols) = (v.rows(), v.cols());
    // repack as parameters around the identity for the shared orthonormalizer
    let mut p = Vec::with_capacity(2 * rows * cols);
    for l in 0..rows {
        for c in 0..cols {
            let z = moved[(l, c)];
            let base = if l == c { T::one() } else { T::zero() };
            p.push(z.re - base);
            p.push(z.im);
        }
    }
    ComplexMatrix::from_columns(&isometry_columns(rows, cols, &p))
}

struct Stage<T> {
    value: T,
    at_floor: bool,
    point: ComplexMatrix<T>,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

/// Riemannian L-BFGS with Armijo backtracking. Curvature pairs are kept as
/// computed, without transport; the resulting direction is projected onto the
/// current tangent space.
///
/// Stops when the gradient norm is below `tol`, when ten iterations gain less
/// than `ftol` (or a relative `1e-13`), or when the budget is spent.
fn stiefel_lbfgs<T, F>(
    f: &F,
    start: ComplexMatrix<T>,
    mu: T,
    floor: T,
    budget: usize,
    tol: T,
    ftol: T,
) -> Stage<T>
where
    T: Real,
    F: Fn(&ComplexMatrix<T>, T) -> (T, ComplexMatrix<T>),
{
    const MEMORY: usize = 8;
    let armijo = T::lit(1e-4);
    let mut v = start;
    let (mut fx, g) = f(&v, mu);
    let mut evaluations = 1;
    let mut grad = tangent(&v, &g);
    let mut history: Vec<(ComplexMatrix<T>, ComplexMatrix<T>, T)> = Vec::with_capacity(MEMORY);
    const WINDOW: usize = 10;
    let mut recent = std::collections::VecDeque::with_capacity(WINDOW + 1);
    let mut converged = false;
    let mut iterations = 0;
    let floor_slack = T::lit(1e-14) * floor.abs().max(T::one());
    let mut at_floor = false;
    while iterations < budget {
        if fx <= floor + floor_slack {
            at_floor = true;
            converged = true;
            break;
        }
        iterations += 1;
        let gnorm2 = re_inner(&grad, &grad);
        if gnorm2 <= tol * tol {
            converged = true;
            break;
        }
        let mut dir = tangent(&v, &two_loop(&grad, &history)).scale(-T::one());
        let mut slope = re_inner(&grad, &dir);
        let mut steepest = history.is_empty();
        if !(slope < T::zero()) {
            history.clear();
            steepest = true;
        }
        if steepest {
            // first step: move a small distance along the gradient
            let scale = T::lit(0.1).min(T::one() / gnorm2.sqrt());
            dir = grad.scale(-scale);
            slope = -gnorm2 * scale;
        }
        let mut t = T::one();
        let mut accepted = None;
        for _ in 0..40 {
            let cand = retract(&v, &dir, t);
            let (fc, gc) = f(&cand, mu);
            evaluations += 1;
            if fc <= fx + armijo * t * slope {
                accepted = Some((cand, fc, gc));
                break;
            }
            t *= T::lit(0.5);
        }
        let Some((cand, fc, gc)) = accepted else {
            if steepest {
                converged = true;
                break;
            }
            history.clear();
            continue;
        };
        let new_grad = tangent(&cand, &gc);
        let s_vec = tangent(&cand, &dir.scale(t));
        let y_vec = &new_grad - &tangent(&cand, &grad);
        let sy = re_inner(&s_vec, &y_vec);
        if sy > T::epsilon() * re_inner(&s_vec, &s_vec).sqrt() * re_inner(&y_vec, &y_vec).sqrt() {
            if history.len() == MEMORY {
                history.remove(0);
            }
            history.push((s_vec, y_vec, T::one() / sy));
        }
        v = cand;
        fx = fc;
        grad = new_grad;
        recent.push_back(fx);
        if recent.len() > WINDOW {
            let old = recent.pop_front().expect("window is full");
            let gain = old - fx;
            if gain <= ftol.max(T::lit(1e-13) * fx.abs().max(T::one())) {
                converged = true;
                break;
            }
        }
    }
    Stage {
        value: fx,
        at_floor,
        point: v,
        iterations,
        evaluations,
        converged,
    }
}

fn two_loop<T: Real>(
    grad: &ComplexMatrix<T>,
    history: &[(ComplexMatrix<T>, ComplexMatrix<T>, T)],
) -> ComplexMatrix<T> {
    let mut q = grad.clone();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = *rho * re_inner(s, &q);
        q = &q - &y.scale(a);
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.last() {
        q = q.scale(re_inner(s, y) / re_inner(y, y));
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = *rho * re_inner(y, &q);
        q = &q + &s.scale(a - b);
    }
    q
}

fn starting_point<T: Real>(dim: usize, restart: usize, cfg: &OptimizerConfig) -> Vec<T> {
    if restart == 0 || cfg.start_spread == 0.0 {
        return vec![T::zero(); dim];
    }
    let mut rng = seeded_rng(derive_seed(cfg.seed, restart as u64));
    (0..dim)
        .map(|_| T::lit(rng.random_range(-cfg.start_spread..=cfg.start_spread)))
        .collect()
}

struct RunOutcome<T> {
    value: T,
    params: Vec<T>,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

/// Nelder-Mead with dimension-adapted coefficients, re-initialized around
/// the incumbent until a cycle stops improving or the budget runs out.
fn run_restart<T, F>(f: &F, start: Vec<T>, cfg: &OptimizerConfig) -> RunOutcome<T>
where
    T: Real,
    F: Fn(&[T]) -> T,
{
    let tol = T::lit(cfg.tol);
    let step = T::lit(cfg.step);
    let mut x = start;
    let mut fx = sanitize(f(&x));
    let mut iterations = 0;
    let mut evaluations = 1;
    let mut converged = false;
    while iterations < cfg.max_iters {
        let cycle = nelder_mead(f, &x, fx, step, cfg.max_iters - iterations, tol);
        iterations += cycle.iterations;
        evaluations += cycle.evaluations;
        converged = cycle.converged;
        let improved = fx - cycle.value > tol;
        if cycle.value < fx {
            x = cycle.params;
            fx = cycle.value;
        }
        if !improved {
            break;
        }
    }
    RunOutcome {
        value: fx,
        params: x,
        iterations,
        evaluations,
        converged,
    }
}

fn sanitize<T: Real>(v: T) -> T {
    if v.is_nan() {
        T::infinity()
    } else {
        v
    }
}

struct Cycle<T> {
    value: T,
    params: Vec<T>,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

fn nelder_mead<T, F>(f: &F, x0: &[T], f0: T, step: T, budget: usize, tol: T) -> Cycle<T>
where
    T: Real,
    F: Fn(&[T]) -> T,
{
    let n = x0.len();
    let nf = T::lit(n.max(1) as f64);
    let alpha = T::one();
    let gamma = T::one() + T::lit(2.0) / nf;
    let rho = (T::lit(0.75) - T::lit(0.5) / nf).max(T::lit(0.5));
    let sigma = (T::one() - T::one() / nf).max(T::lit(0.5));

    let mut evaluations = 0;
    let mut eval = |x: &[T]| {
        evaluations += 1;
        sanitize(f(x))
    };

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![T::zero(); n];
    let mut trial = vec![T::zero(); n];
    while iterations < budget {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst - best <= tol || n == 0 {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = T::zero());
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += *xi;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= nf);

        let along = |t: T, out: &mut Vec<T>, worst: &[T]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                *o = *c + t * (*c - *w);
            }
        };

        let xw = simplex[n].0.clone();
        along(alpha, &mut trial, &xw);
        let fr = eval(&trial);
        let second_worst = simplex[n - 1].1;

        if fr < best {
            let reflected = trial.clone();
            along(alpha * gamma, &mut trial, &xw);
            let fe = eval(&trial);
            simplex[n] = if fe < fr {
                (trial.clone(), fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < second_worst {
            simplex[n] = (trial.clone(), fr);
            continue;
        }
        let (t, reference) = if fr < worst {
            (alpha * rho, fr)
        } else {
            (-rho, worst)
        };
        along(t, &mut trial, &xw);
        let fc = eval(&trial);
        if fc < reference {
            simplex[n] = (trial.clone(), fc);
            continue;
        }
        // shrink toward the best vertex
        let xb = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            for (xi, bi) in v.0.iter_mut().zip(&xb) {
                *xi = *bi + sigma * (*xi - *bi);
            }
            v.1 = eval(&v.0);
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (params, value) = simplex.swap_remove(0);
    Cycle {
        value,
        params,
        iterations,
        evaluations,
        converged,
    }
}
