//! Lower and upper bounds on the concurrence of `2 x K` mixed states, the
//! entanglement-of-formation bound derived from the lower bound, the PPT
//! test, and the exactness certificate for `2 x 3` states.

use std::time::Instant;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::concurrence::{
    concurrence_of_amplitudes, pair_block, project_substates, require_qubit_first, rotate_second,
    substate_margins, SubstateSet,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, partial_transpose, ComplexMatrix};
use crate::optim::{
    maximize, minimize_stiefel, unitary_from_slice, OptimDiagnostics, OptimizerConfig,
    UnitaryParams,
};
use crate::scalar::Real;
use crate::states::{derive_seed, Decomposition, DensityMatrix, PureState};

/// Slack allowed when comparing bounds that hold exactly in theory.
pub const BOUND_SLACK: f64 = 1e-6;

const LB_STREAM: u64 = 0x4c42;
const UB_STREAM: u64 = 0x5542;
const CONCENTRATE_STREAM: u64 = 0x434e;
const WITNESS_STREAM: u64 = 0x5754;

fn sub_config(cfg: &OptimizerConfig, stream: u64) -> OptimizerConfig {
    OptimizerConfig {
        seed: derive_seed(cfg.seed, stream),
        ..cfg.clone()
    }
}

/// Lower bound in a given basis together with its substates.
#[derive(Debug, Clone)]
pub struct LowerBound<T> {
    pub value: T,
    pub substates: SubstateSet<T>,
    pub diagnostics: Option<OptimDiagnostics>,
}

impl<T: Real> LowerBound<T> {
    pub fn basis(&self) -> &ComplexMatrix<T> {
        &self.substates.basis_unitary
    }
}

/// `sqrt(sum_{i<j} C^2(rho^(ij)))` in the basis `{U|k>}`.
pub fn lower_bound_fixed_basis<T: Real>(
    rho: &DensityMatrix<T>,
    u: &ComplexMatrix<T>,
) -> Result<LowerBound<T>> {
    let substates = project_substates(rho, u)?;
    Ok(LowerBound {
        value: substates.sum_sq().sqrt(),
        substates,
        diagnostics: None,
    })
}

/// Maximizes the lower bound over the basis of the second factor.
///
/// The search starts at the input basis, so the result is never below the
/// fixed-basis value there.
pub fn lower_bound_optimized<T: Real>(
    rho: &DensityMatrix<T>,
    cfg: &OptimizerConfig,
) -> Result<LowerBound<T>> {
    cfg.validate()?;
    let k = require_qubit_first(rho)?;
    let m = rho.matrix();
    // While every substate is separable the largest signed margin still
    // points toward the entangled region; the two branches meet at zero.
    let objective = |p: &[T]| -> T {
        let margins = substate_margins(m, &unitary_from_slice(k, p));
        let sum_sq: T = margins
            .iter()
            .filter(|c| **c > T::zero())
            .map(|c| *c * *c)
            .sum();
        if sum_sq > T::zero() {
            sum_sq.sqrt()
        } else {
            margins.into_iter().fold(T::neg_infinity(), T::max)
        }
    };
    let result = maximize(
        objective,
        UnitaryParams::<T>::param_count(k),
        &sub_config(cfg, LB_STREAM),
    );
    let u = UnitaryParams::new(k, result.params)?.to_unitary();
    let mut lb = lower_bound_fixed_basis(rho, &u)?;
    lb.diagnostics = Some(result.diagnostics);
    Ok(lb)
}

/// Average concurrence of an optimized decomposition.
#[derive(Debug, Clone)]
pub struct UpperBound<T> {
    pub value: T,
    pub decomposition: Decomposition<T>,
    pub length: usize,
    pub rank: usize,
    pub diagnostics: OptimDiagnostics,
}

/// Decomposition length used when none is requested: twice the rank,
/// capped at `d^2`.
pub fn default_ub_length(rank: usize, dim: usize) -> usize {
    (2 * rank).min(dim * dim).max(1)
}

fn rank_tolerance<T: Real>() -> T {
    T::psd_tol() * T::lit(0.01)
}

/// Minimizes `sum_l C(|psi~_l>)` over decompositions of `rho` of the given length.
///
/// Candidates are `|psi~_l> = sum_k V_lk sqrt(lambda_k) |e_k>` with `V` an
/// `L x rank` isometry and `(lambda_k, e_k)` the eigenpairs of `rho`, so every
/// candidate reconstructs `rho`. Pure-state concurrence is norm linear, so the
/// subnormalized vectors are summed directly.
pub fn upper_bound<T: Real>(
    rho: &DensityMatrix<T>,
    length: Option<usize>,
    cfg: &OptimizerConfig,
) -> Result<UpperBound<T>> {
    cfg.validate()?;
    let dims = rho.dims();
    let d = dims.total();
    let es = rho.eigensystem();
    let tol = rank_tolerance::<T>();
    let basis: Vec<Vec<Complex<T>>> = es
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > tol)
        .map(|(c, &l)| {
            es.vectors
                .column(c)
                .into_iter()
                .map(|z| z * l.sqrt())
                .collect()
        })
        .collect();
    let rank = basis.len();
    let length = length.unwrap_or_else(|| default_ub_length(rank, d));
    if length < rank {
        return Err(Error::RankTooHigh { length, rank });
    }
    if length > d * d {
        return Err(Error::InvalidParams(format!(
            "decomposition length {length} exceeds {}",
            d * d
        )));
    }
    let (n, k) = (dims.n(), dims.k());
    let members = |v: &ComplexMatrix<T>| -> Vec<Vec<Complex<T>>> {
        (0..length)
            .map(|l| {
                let mut psi = vec![Complex::zero(); d];
                for (c, b) in basis.iter().enumerate() {
                    let w = v[(l, c)];
                    for (x, y) in psi.iter_mut().zip(b) {
                        *x += w * y;
                    }
                }
                psi
            })
            .collect()
    };
    let objective = |v: &ComplexMatrix<T>, mu: T| -> (T, ComplexMatrix<T>) {
        let mut total = T::zero();
        let mut grad = ComplexMatrix::zeros(length, rank);
        for (l, psi) in members(v).iter().enumerate() {
            let (value, h) = smoothed_concurrence(psi, n, k, mu);
            total += value;
            for (c, b) in basis.iter().enumerate() {
                let g: Complex<T> = b.iter().zip(&h).map(|(x, y)| x.conj() * y).sum();
                grad[(l, c)] = g * T::lit(2.0);
            }
        }
        (total, grad)
    };
    let ub_cfg = sub_config(cfg, UB_STREAM);
    let continuation = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 0.0].map(T::lit);
    // sqrt(C^2 + mu^2 w^2) >= mu w and the weights sum to the trace
    let trace = rho.matrix().trace().re;
    let floor = |mu: T| mu * trace;
    let result = minimize_stiefel(objective, floor, length, rank, &continuation, &ub_cfg);

    let vectors = members(&result.point);
    let weight_floor = T::epsilon() * T::lit(16.0);
    let mut elements = Vec::new();
    let mut value = T::zero();
    for v in vectors {
        let psi = PureState::new(v, dims)?;
        let w = psi.norm_sqr();
        if w <= weight_floor {
            continue;
        }
        value += crate::concurrence::pure_concurrence(&psi);
        elements.push((w, psi.normalized()?));
    }
    let total: T = elements.iter().map(|(w, _)| *w).sum();
    for (w, _) in elements.iter_mut() {
        *w /= total;
    }
    Ok(UpperBound {
        value,
        decomposition: Decomposition::new(elements)?,
        length,
        rank,
        diagnostics: result.diagnostics,
    })
}

/// `sqrt(C^2 + mu^2 |psi|^4)` for an unnormalized vector and its derivative
/// with respect to `conj(psi)`.
///
/// With `Psi` the `n x k` amplitude matrix and `rho_N = Psi Psi^dagger`,
/// `d C^2 / d conj(Psi) = 4 (|psi|^2 Psi - rho_N Psi)`. At `mu = 0` the kink at
/// `C = 0` gets the zero subgradient.
fn smoothed_concurrence<T: Real>(
    psi: &[Complex<T>],
    n: usize,
    k: usize,
    mu: T,
) -> (T, Vec<Complex<T>>) {
    let c = concurrence_of_amplitudes(psi, n, k);
    let w: T = psi.iter().map(|z| z.norm_sqr()).sum();
    let value = (c * c + mu * mu * w * w).sqrt();
    if value == T::zero() {
        return (value, vec![Complex::zero(); psi.len()]);
    }
    let row = |a: usize| &psi[a * k..(a + 1) * k];
    let mut h = vec![Complex::zero(); psi.len()];
    for a in 0..n {
        for b in 0..n {
            // (rho_N)_{ab} = sum_j psi_aj conj(psi_bj)
            let r: Complex<T> = row(a).iter().zip(row(b)).map(|(x, y)| x * y.conj()).sum();
            for j in 0..k {
                h[a * k + j] -= r * psi[b * k + j] * T::lit(2.0);
            }
        }
    }
    let self_term = w * T::lit(2.0) + mu * mu * w;
    for (x, p) in h.iter_mut().zip(psi) {
        *x = (*x + p * self_term) / value;
    }
    (value, h)
}

/// `h(x) = -x log2 x - (1 - x) log2 (1 - x)` with `0 log 0 = 0`.
pub fn binary_entropy<T: Real>(x: T) -> T {
    let term = |p: T| {
        if p <= T::zero() {
            T::zero()
        } else {
            -p * p.log2()
        }
    };
    term(x) + term(T::one() - x)
}

/// `h((1 + sqrt(1 - s)) / 2)` for `s = sum_{i<j} C^2(rho^(ij))`.
pub fn eof_from_sum_sq<T: Real>(sum_sq: T) -> Result<T> {
    if !(sum_sq <= T::one() + T::lit(1e-9)) {
        return Err(Error::DomainError {
            sum: sum_sq.as_f64(),
        });
    }
    let s = sum_sq.max(T::zero()).min(T::one());
    if s == T::zero() {
        return Ok(T::zero());
    }
    let half = T::lit(0.5);
    Ok(binary_entropy(half * (T::one() + (T::one() - s).sqrt())))
}

/// Entanglement-of-formation lower bound (bits) at the optimized basis.
pub fn eof_lower_bound<T: Real>(rho: &DensityMatrix<T>, cfg: &OptimizerConfig) -> Result<T> {
    let lb = lower_bound_optimized(rho, cfg)?;
    eof_from_sum_sq(lb.substates.sum_sq())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PptVerdict {
    /// Positive partial transpose on a space where this implies separability.
    SeparablePpt,
    /// Positive partial transpose where bound entanglement is possible.
    PptOnly,
    EntangledNpt,
}

impl PptVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            PptVerdict::SeparablePpt => "separable-PPT",
            PptVerdict::PptOnly => "PPT-only (possibly bound entangled)",
            PptVerdict::EntangledNpt => "entangled-NPT",
        }
    }

    pub fn is_entangled(&self) -> bool {
        matches!(self, PptVerdict::EntangledNpt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptResult<T> {
    pub min_eigenvalue: T,
    pub verdict: PptVerdict,
}

pub fn ppt_verdict<T: Real>(rho: &DensityMatrix<T>) -> PptResult<T> {
    let dims = rho.dims();
    let pt = partial_transpose(rho.matrix(), dims).expect("dims match by construction");
    let min_eigenvalue = *hermitian_eigenvalues(&pt)
        .expect("partial transpose of a Hermitian matrix is Hermitian")
        .last()
        .expect("non-empty");
    let verdict = if min_eigenvalue < -T::psd_tol() {
        PptVerdict::EntangledNpt
    } else if dims.total() <= 6 {
        PptVerdict::SeparablePpt
    } else {
        PptVerdict::PptOnly
    };
    PptResult {
        min_eigenvalue,
        verdict,
    }
}

/// Constructive proof that the lower bound equals the concurrence:
/// `rho = |w><w| + R` with `C(w)` equal to the bound and `R` positive and PPT.
#[derive(Debug, Clone)]
pub struct Certificate<T> {
    pub value: T,
    /// Subnormalized witness; its norm-linear concurrence equals `value`.
    pub witness: PureState<T>,
    pub remainder_min_eigenvalue: T,
    pub remainder_pt_min_eigenvalue: T,
    /// Entangled pair and the basis it refers to.
    pub pair: (usize, usize),
    pub basis: ComplexMatrix<T>,
}

#[derive(Debug, Clone)]
pub enum Exactness<T> {
    Certified(Box<Certificate<T>>),
    /// The certificate does not apply: no entangled substate, several of
    /// them, or (`None`) dimensions other than `2 x 3`.
    NotApplicable {
        entangled_substates: Option<usize>,
    },
    /// The witness search failed; this is not a claim of inexactness.
    Undecided {
        best_margin: T,
    },
}

impl<T> Exactness<T> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Exactness::Certified(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Exactness::Certified(_) => "certified",
            Exactness::NotApplicable { .. } => "not-applicable",
            Exactness::Undecided { .. } => "undecided",
        }
    }
}

/// Searches for a certificate of exactness for a `2 x 3` state.
pub fn exactness_certificate<T: Real>(
    rho: &DensityMatrix<T>,
    cfg: &OptimizerConfig,
) -> Result<Exactness<T>> {
    check_two_by_three(rho)?;
    let lb = lower_bound_optimized(rho, cfg)?;
    exactness_certificate_from(rho, &lb, cfg)
}

fn check_two_by_three<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    let dims = rho.dims();
    if dims.n() != 2 || dims.k() != 3 {
        return Err(Error::UnsupportedDims {
            n: dims.n(),
            k: dims.k(),
            reason: "exactness certificate is defined for 2x3 states",
        });
    }
    Ok(())
}

/// Certificate search reusing an already optimized lower bound.
///
/// If the optimized basis shows several entangled substates, a second search
/// looks for an equally good basis in which the whole bound sits in a single
/// substate before giving up.
pub fn exactness_certificate_from<T: Real>(
    rho: &DensityMatrix<T>,
    lb: &LowerBound<T>,
    cfg: &OptimizerConfig,
) -> Result<Exactness<T>> {
    check_two_by_three(rho)?;
    cfg.validate()?;
    let eps = T::lit(T::tolerances().entangled);
    let count = lb.substates.entangled_count(eps);
    if count == 0 {
        return Ok(Exactness::NotApplicable {
            entangled_substates: Some(0),
        });
    }
    let (basis, set) = if count == 1 {
        (lb.basis().clone(), lb.substates.clone())
    } else {
        match concentrate(rho, lb, cfg)? {
            Some(found) => found,
            None => {
                return Ok(Exactness::NotApplicable {
                    entangled_substates: Some(count),
                })
            }
        }
    };
    let sub = set
        .substates
        .iter()
        .find(|s| s.concurrence > eps)
        .expect("one entangled substate");
    search_witness(rho, &basis, sub.pair, sub.concurrence, cfg)
}

/// Looks for a basis where one substate carries the full lower bound.
fn concentrate<T: Real>(
    rho: &DensityMatrix<T>,
    lb: &LowerBound<T>,
    cfg: &OptimizerConfig,
) -> Result<Option<(ComplexMatrix<T>, SubstateSet<T>)>> {
    let k = 3;
    let m = rho.matrix();
    let start = lb.basis();
    // largest margin minus the entanglement left in the other substates
    let objective = |p: &[T]| -> T {
        let u = start * &unitary_from_slice(k, p);
        let mut margins = substate_margins(m, &u);
        margins.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        margins[0] - margins[1..].iter().map(|c| c.max(T::zero())).sum::<T>()
    };
    let result = maximize(
        objective,
        UnitaryParams::<T>::param_count(k),
        &OptimizerConfig {
            tol: cfg.tol.min(1e-13),
            ..sub_config(cfg, CONCENTRATE_STREAM)
        },
    );
    let u = start * &UnitaryParams::new(k, result.params)?.to_unitary();
    let set = project_substates(rho, &u)?;
    let top = set.concurrences().into_iter().fold(T::zero(), T::max);
    if top < lb.value - T::lit(BOUND_SLACK)
        || set.entangled_count(T::lit(T::tolerances().entangled)) != 1
    {
        return Ok(None);
    }
    Ok(Some((u, set)))
}

/// Maximizes `min(lambda_min(R), lambda_min(R^T_B))` for `R = rho - |w><w|`
/// over `w` in the image of the pair projector with `C(w)` fixed to `target`.
///
/// The constraint is imposed exactly by rescaling: `C` is quadratic in the
/// norm, so any direction with nonzero concurrence is scaled onto it.
fn search_witness<T: Real>(
    rho: &DensityMatrix<T>,
    basis: &ComplexMatrix<T>,
    pair: (usize, usize),
    target: T,
    cfg: &OptimizerConfig,
) -> Result<Exactness<T>> {
    let dims = rho.dims();
    let k = dims.k();
    let (i, j) = pair;
    let m = rho.matrix();
    // product basis of the pair subspace: (0,i), (0,j), (1,i), (1,j)
    let fi = basis.column(i);
    let fj = basis.column(j);
    let embed = |a: &[Complex<T>]| -> Vec<Complex<T>> {
        let mut v = vec![Complex::zero(); dims.total()];
        for l in 0..k {
            v[l] = a[0] * fi[l] + a[1] * fj[l];
            v[k + l] = a[2] * fi[l] + a[3] * fj[l];
        }
        v
    };
    let block = pair_block(&rotate_second(m, basis), k, i, j);
    let top = {
        let es = crate::linalg::hermitian_eigensystem(&block.hermitian_part())?;
        es.vectors.column(0)
    };
    let witness_for = |p: &[T]| -> Option<Vec<Complex<T>>> {
        let a: Vec<Complex<T>> = (0..4)
            .map(|c| top[c] + Complex::new(p[2 * c], p[2 * c + 1]))
            .collect();
        let c = (a[0] * a[3] - a[1] * a[2]).norm() * T::lit(2.0);
        if c <= T::lit(1e-12) {
            return None;
        }
        let s = (target / c).sqrt();
        Some(embed(&a).into_iter().map(|z| z * s).collect())
    };
    let margin = |w: &[Complex<T>]| -> Option<(T, T)> {
        let r = m - &ComplexMatrix::projector(w);
        let a = *hermitian_eigenvalues(&r).ok()?.last()?;
        let pt = partial_transpose(&r, dims).ok()?;
        let b = *hermitian_eigenvalues(&pt).ok()?.last()?;
        Some((a, b))
    };
    let penalty = -T::lit(10.0);
    let objective = |p: &[T]| -> T {
        witness_for(p)
            .and_then(|w| margin(&w))
            .map(|(a, b)| a.min(b))
            .unwrap_or(penalty)
    };
    let base = OptimizerConfig {
        tol: cfg.tol.min(1e-14),
        start_spread: 1.0,
        ..sub_config(cfg, WITNESS_STREAM)
    };
    let threshold = -T::lit(T::tolerances().certificate);
    // a single start from the dominant eigenvector usually suffices
    let mut result = maximize(objective, 8, &base.clone().with_restarts(1));
    if result.value < threshold && cfg.restarts > 1 {
        result = maximize(objective, 8, &base);
    }
    if result.value < threshold {
        return Ok(Exactness::Undecided {
            best_margin: result.value,
        });
    }
    let w = witness_for(&result.params).expect("accepted witness is valid");
    let (remainder_min, remainder_pt_min) = margin(&w).expect("accepted witness has a spectrum");
    let witness = PureState::new(w, dims)?;
    let value = crate::concurrence::pure_concurrence(&witness);
    if remainder_min < threshold || remainder_pt_min < threshold {
        return Ok(Exactness::Undecided {
            best_margin: remainder_min.min(remainder_pt_min),
        });
    }
    Ok(Exactness::Certified(Box::new(Certificate {
        value,
        witness,
        remainder_min_eigenvalue: remainder_min,
        remainder_pt_min_eigenvalue: remainder_pt_min,
        pair,
        basis: basis.clone(),
    })))
}

/// Options for [`compute_report`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub optimizer: OptimizerConfig,
    pub ub_length: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportDiagnostics {
    pub lb_optimizer: OptimDiagnostics,
    pub ub_optimizer: OptimDiagnostics,
    pub wall_time_ms: f64,
}

/// Every bound and test computed for one state.
#[derive(Debug, Clone)]
pub struct BoundReport<T> {
    pub lb_standard: LowerBound<T>,
    pub lb_optimized: LowerBound<T>,
    pub ub: UpperBound<T>,
    pub eof_lb: T,
    pub ppt: PptResult<T>,
    pub exactness: Exactness<T>,
    pub diagnostics: ReportDiagnostics,
}

impl<T: Real> BoundReport<T> {
    /// `ub - lb_optimized`.
    pub fn gap(&self) -> T {
        self.ub.value - self.lb_optimized.value
    }

    /// Bounds agree within slack. Only a certificate proves exactness.
    pub fn numerically_coincident(&self) -> bool {
        self.gap().abs() <= T::lit(BOUND_SLACK)
    }
}

/// Computes the full [`BoundReport`] for a `2 x K` state.
pub fn compute_report<T: Real>(
    rho: &DensityMatrix<T>,
    opts: &ReportOptions,
) -> Result<BoundReport<T>> {
    let started = Instant::now();
    let k = require_qubit_first(rho)?;
    let cfg = &opts.optimizer;
    let lb_standard = lower_bound_fixed_basis(rho, &ComplexMatrix::identity(k))?;
    let lb_optimized = lower_bound_optimized(rho, cfg)?;
    let ub = upper_bound(rho, opts.ub_length, cfg)?;
    let eof_lb = eof_from_sum_sq(lb_optimized.substates.sum_sq())?;
    let ppt = ppt_verdict(rho);
    let exactness = if k == 3 {
        exactness_certificate_from(rho, &lb_optimized, cfg)?
    } else {
        Exactness::NotApplicable {
            entangled_substates: None,
        }
    };
    let diagnostics = ReportDiagnostics {
        lb_optimizer: lb_optimized.diagnostics.clone().unwrap_or_default(),
        ub_optimizer: ub.diagnostics.clone(),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(BoundReport {
        lb_standard,
        lb_optimized,
        ub,
        eof_lb,
        ppt,
        exactness,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::{pure_concurrence, wootters_concurrence};
    use crate::linalg::{tensor_product, BipartiteDims};
    use crate::states::{family_state, random_induced_state, random_pure_state, FamilyParams};
    use crate::testutil::{random_psd, random_unitary, rng};

    type M = ComplexMatrix<f64>;

    fn d23() -> BipartiteDims {
        BipartiteDims::qubit_by(3).unwrap()
    }

    fn family(x: f64, y: f64) -> DensityMatrix<f64> {
        family_state(FamilyParams::new(x, y).unwrap())
    }

    fn quick() -> OptimizerConfig {
        OptimizerConfig::default().with_restarts(6)
    }

    #[test]
    fn fixed_basis_examples() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(d23());
        assert_eq!(
            lower_bound_fixed_basis(&mixed, &M::identity(3))
                .unwrap()
                .value,
            0.0
        );

        let lb = lower_bound_fixed_basis(&family(0.5, 0.5), &M::identity(3)).unwrap();
        assert!((lb.value - 0.5f64.sqrt()).abs() < 1e-12);

        let lb = lower_bound_fixed_basis(&family(0.5, 0.0), &M::identity(3)).unwrap();
        assert!((lb.value - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn optimized_bound_of_product_state_is_zero() {
        let mut r = rng(1);
        let a = random_psd(&mut r, 2);
        let b = random_psd(&mut r, 3);
        let rho = DensityMatrix::new(tensor_product(&a, &b), d23()).unwrap();
        assert!(lower_bound_optimized(&rho, &quick()).unwrap().value < 1e-8);
    }

    #[test]
    fn optimized_bound_of_equal_family_mixture() {
        let lb = lower_bound_optimized(&family(0.5, 0.5), &quick()).unwrap();
        assert!((lb.value - 0.5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn optimized_bound_is_local_unitary_invariant() {
        let mut r = rng(2);
        let rho = random_induced_state::<f64>(6, d23(), 17).unwrap();
        let base = lower_bound_optimized(&rho, &OptimizerConfig::default())
            .unwrap()
            .value;
        for _ in 0..2 {
            let rotated = rho
                .local_rotation(&random_unitary(&mut r, 2), &random_unitary(&mut r, 3))
                .unwrap();
            let v = lower_bound_optimized(&rotated, &OptimizerConfig::default())
                .unwrap()
                .value;
            assert!((v - base).abs() < 1e-5, "{v} vs {base}");
        }
    }

    #[test]
    fn optimized_bound_sees_weakly_entangled_states() {
        // full-rank states whose substates are all separable in most bases
        for seed in [14, 18] {
            let rho = random_induced_state::<f64>(10, d23(), seed).unwrap();
            if ppt_verdict(&rho).verdict.is_entangled() {
                let cfg = OptimizerConfig::default().with_seed(seed);
                assert!(
                    lower_bound_optimized(&rho, &cfg).unwrap().value > 1e-6,
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn upper_bound_of_pure_state() {
        let psi = random_pure_state::<f64>(d23(), 3);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let ub = upper_bound(&rho, None, &quick()).unwrap();
        assert!((ub.value - pure_concurrence(&psi)).abs() < 1e-9);
        assert_eq!(ub.rank, 1);
    }

    #[test]
    fn upper_bound_of_equal_family_mixture() {
        let rho = family(0.5, 0.5);
        let ub = upper_bound(&rho, None, &OptimizerConfig::default()).unwrap();
        assert!((ub.value - 3f64.sqrt() / 2.0).abs() < 1e-4, "{}", ub.value);
        assert!(ub.decomposition.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
    }

    #[test]
    fn upper_bound_matches_wootters_for_two_qubits() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        for seed in 0..5 {
            let rho = random_induced_state::<f64>(4, dims, seed).unwrap();
            let w = wootters_concurrence(rho.matrix()).unwrap();
            let ub = upper_bound(&rho, Some(4), &OptimizerConfig::default()).unwrap();
            assert!(
                (ub.value - w).abs() < 1e-4,
                "seed {seed}: {} vs {w}",
                ub.value
            );
        }
    }

    #[test]
    fn upper_bound_rejects_short_decomposition() {
        let rho = DensityMatrix::<f64>::maximally_mixed(d23());
        assert!(matches!(
            upper_bound(&rho, Some(3), &quick()),
            Err(Error::RankTooHigh { length: 3, rank: 6 })
        ));
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(1.0f64), 0.0);
        assert_eq!(binary_entropy(0.0f64), 0.0);
        assert_eq!(binary_entropy(0.5f64), 1.0);
    }

    #[test]
    fn eof_bound_values() {
        assert_eq!(eof_from_sum_sq(0.0f64).unwrap(), 0.0);
        assert_eq!(eof_from_sum_sq(1.0f64).unwrap(), 1.0);
        let half = eof_from_sum_sq(0.5f64).unwrap();
        let x = (1.0 + 0.5f64.sqrt()) / 2.0;
        let expected = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((half - expected).abs() < 1e-15);
        assert!((half - 0.6009).abs() < 1e-4);
        assert!(matches!(
            eof_from_sum_sq(1.1f64),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn eof_bound_of_separable_state() {
        let rho = DensityMatrix::<f64>::maximally_mixed(d23());
        assert_eq!(eof_lower_bound(&rho, &quick()).unwrap(), 0.0);
    }

    #[test]
    fn ppt_examples() {
        let mixed = ppt_verdict(&DensityMatrix::<f64>::maximally_mixed(d23()));
        assert!((mixed.min_eigenvalue - 1.0 / 6.0).abs() < 1e-14);
        assert_eq!(mixed.verdict, PptVerdict::SeparablePpt);

        let bell = {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut v = vec![Complex::zero(); 6];
            v[0] = Complex::new(s, 0.0);
            v[4] = Complex::new(s, 0.0);
            DensityMatrix::from_pure(&PureState::new(v, d23()).unwrap()).unwrap()
        };
        let b = ppt_verdict(&bell);
        assert!((b.min_eigenvalue + 0.5).abs() < 1e-12);
        assert_eq!(b.verdict, PptVerdict::EntangledNpt);

        assert_eq!(
            ppt_verdict(&family(0.25, 0.0)).verdict,
            PptVerdict::SeparablePpt
        );

        let big = DensityMatrix::<f64>::maximally_mixed(BipartiteDims::qubit_by(4).unwrap());
        assert_eq!(ppt_verdict(&big).verdict, PptVerdict::PptOnly);
    }

    #[test]
    fn certificate_for_werner_like_family() {
        match exactness_certificate(&family(0.5, 0.0), &quick()).unwrap() {
            Exactness::Certified(c) => {
                assert!((c.value - 1.0 / 3.0).abs() < 1e-6);
                assert!(c.remainder_min_eigenvalue >= -1e-9);
                assert!(c.remainder_pt_min_eigenvalue >= -1e-9);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn certificate_not_applicable_cases() {
        assert!(matches!(
            exactness_certificate(&family(0.5, 0.5), &quick()).unwrap(),
            Exactness::NotApplicable { .. }
        ));
        assert!(matches!(
            exactness_certificate(&DensityMatrix::<f64>::maximally_mixed(d23()), &quick()).unwrap(),
            Exactness::NotApplicable {
                entangled_substates: Some(0)
            }
        ));
    }

    #[test]
    fn certificate_requires_two_by_three() {
        let rho = DensityMatrix::<f64>::maximally_mixed(BipartiteDims::qubit_by(2).unwrap());
        assert!(matches!(
            exactness_certificate(&rho, &quick()),
            Err(Error::UnsupportedDims { .. })
        ));
    }

    #[test]
    fn report_sandwich_on_random_states() {
        for seed in 0..3 {
            let rho = random_induced_state::<f64>(6, d23(), seed).unwrap();
            let report = compute_report(&rho, &ReportOptions::default()).unwrap();
            assert!(report.lb_standard.value <= report.lb_optimized.value + 1e-12);
            assert!(report.lb_optimized.value <= report.ub.value + 1e-6);
            assert!(report.ub.value <= 1.0 + 1e-9);
            if let Exactness::Certified(c) = &report.exactness {
                assert!((c.value - report.lb_optimized.value).abs() <= 1e-6);
                assert!(c.value <= report.ub.value + 1e-6);
            }
        }
    }

    #[test]
    fn depolarizing_never_raises_the_bound() {
        let rho = random_induced_state::<f64>(4, d23(), 21).unwrap();
        let cfg = OptimizerConfig::default();
        let base = lower_bound_optimized(&rho, &cfg).unwrap().value;
        let mut prev = base;
        for t in [0.1, 0.3, 0.6, 1.0] {
            let v = lower_bound_optimized(&rho.depolarize(t), &cfg)
                .unwrap()
                .value;
            assert!(v <= base + 1e-6);
            assert!(v <= prev + 1e-6);
            prev = v;
        }
    }

    #[test]
    fn single_precision_lower_bound() {
        let rho = family_state(FamilyParams::new(0.5f32, 0.5).unwrap());
        let lb = lower_bound_fixed_basis(&rho, &ComplexMatrix::identity(3)).unwrap();
        assert!((lb.value - 0.5f32.sqrt()).abs() < 1e-5);
    }
}
