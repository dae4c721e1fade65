//! Concurrence of pure bipartite states, of two-qubit mixed states, and of
//! the `2 x 2` substates obtained by projecting a `2 x K` state.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    check_psd_spectrum, hermitian_eigensystem, partial_trace, singular_values, tensor_product,
    BipartiteDims, ComplexMatrix, Factor,
};
use crate::scalar::Real;
use crate::states::{DensityMatrix, PureState};

/// `F(A) = A + tr(A) 1 - 1_N (x) tr_N(A) - tr_K(A) (x) 1_K`.
///
/// Each partial trace is placed back on the factor it was reduced to.
pub fn flip_operator<T: Real>(
    a: &ComplexMatrix<T>,
    dims: BipartiteDims,
) -> Result<ComplexMatrix<T>> {
    if a.rows() != dims.total() || a.cols() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator for dims {dims}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermiticity_deviation();
    if dev > T::herm_tol() {
        return Err(Error::NonHermitian {
            deviation: dev.as_f64(),
        });
    }
    let d = dims.total();
    let on_k = partial_trace(a, dims, Factor::First)?;
    let on_n = partial_trace(a, dims, Factor::Second)?;
    let id_n = ComplexMatrix::identity(dims.n());
    let id_k = ComplexMatrix::identity(dims.k());
    let tr = a.trace();
    let mut out = a.clone();
    let kn = tensor_product(&id_n, &on_k);
    let nk = tensor_product(&on_n, &id_k);
    for i in 0..d {
        out[(i, i)] += tr;
        for j in 0..d {
            out[(i, j)] -= kn[(i, j)] + nk[(i, j)];
        }
    }
    Ok(out)
}

/// `sqrt(<psi| F(|psi><psi|) |psi>)`, evaluated through the flip operator.
pub fn pure_concurrence_flip<T: Real>(psi: &PureState<T>) -> T {
    let v = psi.amplitudes();
    let f = flip_operator(&psi.projector(), psi.dims()).expect("projector is Hermitian");
    let fv = f.mul_vec(v);
    let e: Complex<T> = v.iter().zip(&fv).map(|(a, b)| a.conj() * b).sum();
    clamp_zero(e.re.max(T::zero()).sqrt())
}

/// `sqrt(2 (<psi|psi>^2 - tr rho_N^2))` for a possibly unnormalized state.
///
/// The bracket equals four times the sum of squared `2 x 2` minors of the
/// `n x k` amplitude matrix (Lagrange identity), which is evaluated here so
/// that product states give an exact zero instead of a cancellation residue.
pub fn pure_concurrence<T: Real>(psi: &PureState<T>) -> T {
    let dims = psi.dims();
    concurrence_of_amplitudes(psi.amplitudes(), dims.n(), dims.k())
}

pub(crate) fn concurrence_of_amplitudes<T: Real>(v: &[Complex<T>], n: usize, k: usize) -> T {
    let mut s = T::zero();
    for a in 0..n {
        for b in (a + 1)..n {
            let ra = &v[a * k..(a + 1) * k];
            let rb = &v[b * k..(b + 1) * k];
            for j in 0..k {
                for l in (j + 1)..k {
                    s += (ra[j] * rb[l] - ra[l] * rb[j]).norm_sqr();
                }
            }
        }
    }
    clamp_zero((T::lit(4.0) * s).sqrt())
}

fn clamp_zero<T: Real>(c: T) -> T {
    if c < T::lit(T::tolerances().zero_clamp) {
        T::zero()
    } else {
        c
    }
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)`.
///
/// The `l_i` are the square roots of the eigenvalues of `rho rho~` with
/// `rho~ = (sy (x) sy) rho* (sy (x) sy)`. They are obtained as singular values
/// of `W^T (sy (x) sy) W` for a square-root factor `rho = W W^dagger`, which
/// keeps them real, non-negative and accurate near rank-deficient inputs.
/// Unnormalized inputs are accepted; the result is linear in the trace.
pub fn wootters_concurrence<T: Real>(rho4: &ComplexMatrix<T>) -> Result<T> {
    if rho4.rows() != 4 || rho4.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit operator must be 4x4, got {}x{}",
            rho4.rows(),
            rho4.cols()
        )));
    }
    let es = hermitian_eigensystem(rho4)?;
    check_psd_spectrum(&es.values)?;
    wootters_from_eigensystem(&es.values, &es.vectors)
}

// Signed permutation form of sy (x) sy: (Y v)_a = sign[a] * v[3 - a].
const SPIN_FLIP_SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

fn wootters_margin<T: Real>(values: &[T], vectors: &ComplexMatrix<T>) -> Result<T> {
    let max = values[0].max(T::zero());
    if max == T::zero() {
        return Ok(T::zero());
    }
    let cutoff = T::lit(64.0) * T::epsilon() * max;
    let factor: Vec<Vec<Complex<T>>> = values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cutoff)
        .map(|(c, &l)| {
            let s = l.sqrt();
            vectors.column(c).into_iter().map(|z| z * s).collect()
        })
        .collect();
    let r = factor.len();
    // tau = W^T Y W
    let tau = ComplexMatrix::from_fn(r, r, |p, q| {
        (0..4)
            .map(|a| factor[p][a] * factor[q][3 - a] * T::lit(SPIN_FLIP_SIGN[a]))
            .sum()
    });
    let sv = singular_values(&tau)?;
    let rest: T = sv.iter().skip(1).copied().sum();
    Ok(sv[0] - rest)
}

fn wootters_from_eigensystem<T: Real>(values: &[T], vectors: &ComplexMatrix<T>) -> Result<T> {
    Ok(clamp_zero(wootters_margin(values, vectors)?.max(T::zero())))
}

/// `l1 - l2 - l3 - l4` without clamping; negative for separable inputs.
pub(crate) fn wootters_signed<T: Real>(rho4: &ComplexMatrix<T>) -> T {
    match hermitian_eigensystem(&rho4.hermitian_part()) {
        Ok(es) => wootters_margin(&es.values, &es.vectors).unwrap_or(T::zero()),
        Err(_) => T::zero(),
    }
}

/// A projected `2 x 2` substate and its concurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct Substate<T> {
    /// Basis indices `(i, j)`, `i < j`, of the second factor.
    pub pair: (usize, usize),
    /// Unnormalized `4 x 4` block in the ordering `(0,i), (0,j), (1,i), (1,j)`.
    pub matrix: ComplexMatrix<T>,
    pub concurrence: T,
}

/// All `K (K - 1) / 2` substates of a `2 x K` state relative to a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstateSet<T> {
    pub basis_unitary: ComplexMatrix<T>,
    pub substates: Vec<Substate<T>>,
}

impl<T: Real> SubstateSet<T> {
    pub fn sum_sq(&self) -> T {
        self.substates
            .iter()
            .map(|s| s.concurrence * s.concurrence)
            .sum()
    }

    pub fn entangled_count(&self, threshold: T) -> usize {
        self.substates
            .iter()
            .filter(|s| s.concurrence > threshold)
            .count()
    }

    pub fn concurrences(&self) -> Vec<T> {
        self.substates.iter().map(|s| s.concurrence).collect()
    }
}

pub(crate) fn require_qubit_first<T: Real>(rho: &DensityMatrix<T>) -> Result<usize> {
    let dims = rho.dims();
    if dims.n() != 2 {
        return Err(Error::UnsupportedDims {
            n: dims.n(),
            k: dims.k(),
            reason: "first factor must be a qubit",
        });
    }
    Ok(dims.k())
}

/// `(1 (x) U)^dagger rho (1 (x) U)`: the state expressed in the basis `{U|k>}`.
pub(crate) fn rotate_second<T: Real>(
    rho: &ComplexMatrix<T>,
    u: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let k = u.rows();
    let d = rho.rows();
    let n = d / k;
    // right multiply by (1 (x) U), then left multiply by its adjoint
    let mut tmp = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for b in 0..n {
            for j in 0..k {
                let mut acc = Complex::zero();
                for l in 0..k {
                    acc += rho[(r, b * k + l)] * u[(l, j)];
                }
                tmp[(r, b * k + j)] = acc;
            }
        }
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for a in 0..n {
        for i in 0..k {
            for c in 0..d {
                let mut acc = Complex::zero();
                for l in 0..k {
                    acc += u[(l, i)].conj() * tmp[(a * k + l, c)];
                }
                out[(a * k + i, c)] = acc;
            }
        }
    }
    out
}

pub(crate) fn pair_block<T: Real>(
    rotated: &ComplexMatrix<T>,
    k: usize,
    i: usize,
    j: usize,
) -> ComplexMatrix<T> {
    let idx = [i, j, k + i, k + j];
    ComplexMatrix::from_fn(4, 4, |r, c| rotated[(idx[r], idx[c])])
}

pub(crate) fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| ((i + 1)..k).map(move |j| (i, j)))
}

/// Signed Wootters margins of all substates; positive entries are the
/// substate concurrences.
pub(crate) fn substate_margins<T: Real>(rho: &ComplexMatrix<T>, u: &ComplexMatrix<T>) -> Vec<T> {
    let k = u.rows();
    let rotated = rotate_second(rho, u);
    pairs(k)
        .map(|(i, j)| wootters_signed(&pair_block(&rotated, k, i, j)))
        .collect()
}

/// Projects `rho` onto every `2 x 2` subspace `span{U|i>, U|j>}` of the
/// second factor.
pub fn project_substates<T: Real>(
    rho: &DensityMatrix<T>,
    u: &ComplexMatrix<T>,
) -> Result<SubstateSet<T>> {
    let k = require_qubit_first(rho)?;
    if u.rows() != k || u.cols() != k {
        return Err(Error::DimensionMismatch(format!(
            "basis unitary must be {k}x{k}, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    u.check_unitary()?;
    let rotated = rotate_second(rho.matrix(), u);
    let substates = pairs(k)
        .map(|(i, j)| {
            let matrix = pair_block(&rotated, k, i, j).hermitian_part();
            let concurrence = wootters_concurrence(&matrix)?;
            Ok(Substate {
                pair: (i, j),
                matrix,
                concurrence,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubstateSet {
        basis_unitary: u.clone(),
        substates,
    })
}

/// `P^(ij) psi` in the rotated basis, compressed to a `2 x 2` vector.
pub fn project_pure<T: Real>(
    psi: &PureState<T>,
    u: &ComplexMatrix<T>,
    i: usize,
    j: usize,
) -> Result<PureState<T>> {
    let dims = psi.dims();
    let k = dims.k();
    let v = psi.amplitudes();
    let coeff = |a: usize, col: usize| -> Complex<T> {
        (0..k)
            .map(|l| u[(l, col)].conj() * v[dims.index(a, l)])
            .sum()
    };
    let amps = vec![coeff(0, i), coeff(0, j), coeff(1, i), coeff(1, j)];
    PureState::new(amps, BipartiteDims::new(2, 2)?)
}

/// `|C^2(psi) - sum_{i<j} C^2(P^(ij) psi)|` in the basis `{U|k>}`.
///
/// The left side is evaluated through the flip operator, the right side
/// from the projected two-qubit vectors.
pub fn pure_projection_identity_residual<T: Real>(
    psi: &PureState<T>,
    u: &ComplexMatrix<T>,
) -> Result<T> {
    let dims = psi.dims();
    if dims.n() != 2 {
        return Err(Error::UnsupportedDims {
            n: dims.n(),
            k: dims.k(),
            reason: "first factor must be a qubit",
        });
    }
    if u.rows() != dims.k() {
        return Err(Error::DimensionMismatch("basis unitary size".into()));
    }
    u.check_unitary()?;
    let lhs = pure_concurrence_flip(psi).powi(2);
    let rhs = pairs(dims.k())
        .map(|(i, j)| project_pure(psi, u, i, j).map(|p| pure_concurrence(&p).powi(2)))
        .sum::<Result<T>>()?;
    Ok((lhs - rhs).abs())
}
