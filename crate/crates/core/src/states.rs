//! Validated state types, random induced states and the two-parameter
//! `2 x 3` family used as a worked example throughout the crate.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{
    check_psd_spectrum, hermitian_eigensystem, inner, norm_sqr, BipartiteDims, ComplexMatrix,
    Eigensystem,
};
use crate::scalar::Real;

/// Hermitian, unit-trace, positive-semidefinite operator on a bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    dims: BipartiteDims,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `m` as a density matrix on `dims`.
    ///
    /// Drift within tolerance is normalized: the matrix is symmetrized and
    /// its trace rescaled to one.
    pub fn new(m: ComplexMatrix<T>, dims: BipartiteDims) -> Result<Self> {
        if m.rows() != dims.total() || m.cols() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims {dims}",
                m.rows(),
                m.cols()
            )));
        }
        let dev = m.hermiticity_deviation();
        if dev > T::herm_tol() {
            return Err(Error::NonHermitian {
                deviation: dev.as_f64(),
            });
        }
        let m = m.hermitian_part();
        let trace = m.trace().re;
        if (trace - T::one()).abs() > T::lit(T::tolerances().trace) {
            return Err(Error::TraceNotOne {
                trace: trace.as_f64(),
            });
        }
        let matrix = m.scale(T::one() / trace);
        let es = hermitian_eigensystem(&matrix)?;
        check_psd_spectrum(&es.values)?;
        Ok(Self { dims, matrix })
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let d = dims.total();
        Self {
            dims,
            matrix: ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64)),
        }
    }

    /// Projector onto the normalized `psi`.
    pub fn from_pure(psi: &PureState<T>) -> Result<Self> {
        let unit = psi.normalized()?;
        Self::new(ComplexMatrix::projector(unit.amplitudes()), psi.dims())
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn eigensystem(&self) -> Eigensystem<T> {
        hermitian_eigensystem(&self.matrix).expect("validated density matrix is Hermitian")
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: T) -> usize {
        self.eigensystem()
            .values
            .iter()
            .filter(|&&l| l > tol)
            .count()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> T {
        let n = self.matrix.rows();
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s += self.matrix[(i, j)].norm_sqr();
            }
        }
        s
    }

    /// `(A (x) B) rho (A (x) B)^dagger` for unitaries on each factor.
    pub fn local_rotation(&self, a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<Self> {
        if a.rows() != self.dims.n() || b.rows() != self.dims.k() {
            return Err(Error::DimensionMismatch("local unitary sizes".into()));
        }
        a.check_unitary()?;
        b.check_unitary()?;
        let u = crate::linalg::tensor_product(a, b);
        Self::new(&(&u * &self.matrix) * &u.adjoint(), self.dims)
    }

    /// Convex combination `(1 - t) rho + t 1/d`.
    pub fn depolarize(&self, t: T) -> Self {
        let mixed = Self::maximally_mixed(self.dims);
        Self {
            dims: self.dims,
            matrix: &self.matrix.scale(T::one() - t) + &mixed.matrix.scale(t),
        }
    }
}

/// Possibly unnormalized vector on a bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    dims: BipartiteDims,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<Complex<T>>, dims: BipartiteDims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {dims}",
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { dims, amplitudes })
    }

    /// `|i> (x) |j>`.
    pub fn basis(dims: BipartiteDims, i: usize, j: usize) -> Self {
        let mut amplitudes = vec![Complex::zero(); dims.total()];
        amplitudes[dims.index(i, j)] = Complex::one();
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self {
            dims: self.dims,
            amplitudes: self.amplitudes.iter().map(|z| z * s).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= T::zero() {
            return Err(Error::InvalidParams(
                "zero vector cannot be normalized".into(),
            ));
        }
        Ok(self.scaled(Complex::new(T::one() / n2.sqrt(), T::zero())))
    }

    /// `|psi><psi|` without normalization.
    pub fn projector(&self) -> ComplexMatrix<T> {
        ComplexMatrix::projector(&self.amplitudes)
    }
}

/// Weighted pure-state ensemble `{p_l, |psi_l>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T> {
    elements: Vec<(T, PureState<T>)>,
}

impl<T: Real> Decomposition<T> {
    /// Validates weights in `(0, 1]` summing to one and unit-norm states.
    pub fn new(elements: Vec<(T, PureState<T>)>) -> Result<Self> {
        let tol = T::lit(1e-10).max(T::lit(T::tolerances().trace));
        if elements.is_empty() {
            return Err(Error::InvalidParams("empty decomposition".into()));
        }
        let dims = elements[0].1.dims();
        let d = dims.total();
        if elements.len() > d * d {
            return Err(Error::InvalidParams(format!(
                "decomposition length {} exceeds {}",
                elements.len(),
                d * d
            )));
        }
        for (p, psi) in &elements {
            if psi.dims() != dims {
                return Err(Error::DimensionMismatch(
                    "mixed dims in decomposition".into(),
                ));
            }
            if !(*p > T::zero() && *p <= T::one() + tol) {
                return Err(Error::InvalidParams(format!("weight {p} outside (0, 1]")));
            }
            if (psi.norm_sqr() - T::one()).abs() > tol {
                return Err(Error::InvalidParams(
                    "decomposition states must be unit norm".into(),
                ));
            }
        }
        let total: T = elements.iter().map(|(p, _)| *p).sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidParams(format!("weights sum to {total}")));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[(T, PureState<T>)] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `sum_l p_l |psi_l><psi_l|`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d = self.elements[0].1.dims().total();
        self.elements
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, (p, psi)| {
                &acc + &psi.projector().scale(*p)
            })
    }
}

/// Mixes a master seed with a stream index (SplitMix64 finalizer).
///
/// Used to derive per-state and per-restart seeds so that every unit of work
/// can be regenerated independently of scheduling order.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(master ^ mix(stream))
}

/// Seeded generator used for all sampling in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian amplitude (two real normals of variance 1/2).
pub fn complex_gaussian<T: Real>(rng: &mut ChaCha8Rng) -> Complex<T> {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re * half), T::lit(im * half))
}

/// Random state from the measure induced by partial tracing a uniformly
/// random pure state on `dims (x) C^m_env`.
///
/// The environment trace is computed as `G G^dagger` where `G` is the
/// normalized `(n k) x m_env` amplitude matrix.
pub fn random_induced_state<T: Real>(
    m_env: usize,
    dims: BipartiteDims,
    seed: u64,
) -> Result<DensityMatrix<T>> {
    if m_env == 0 {
        return Err(Error::InvalidParams(
            "environment dimension must be at least 1".into(),
        ));
    }
    let mut rng = seeded_rng(seed);
    let d = dims.total();
    let g: Vec<Complex<T>> = (0..d * m_env).map(|_| complex_gaussian(&mut rng)).collect();
    let inv = T::one() / norm_sqr(&g);
    let matrix = ComplexMatrix::from_fn(d, d, |a, b| {
        let ra = &g[a * m_env..(a + 1) * m_env];
        let rb = &g[b * m_env..(b + 1) * m_env];
        ra.iter()
            .zip(rb)
            .map(|(x, y)| x * y.conj())
            .sum::<Complex<T>>()
            * inv
    });
    DensityMatrix::new(matrix, dims)
}

/// Uniformly random unit vector (Fubini-Study measure).
pub fn random_pure_state<T: Real>(dims: BipartiteDims, seed: u64) -> PureState<T> {
    let mut rng = seeded_rng(seed);
    let v: Vec<Complex<T>> = (0..dims.total())
        .map(|_| complex_gaussian(&mut rng))
        .collect();
    PureState::new(v, dims)
        .and_then(|p| p.normalized())
        .expect("gaussian vector is finite and nonzero")
}

/// Haar-random unitary: Gram-Schmidt on the columns of a complex Gaussian
/// matrix, which fixes the phases of the triangular factor.
pub fn random_unitary<T: Real>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    let mut rng = seeded_rng(seed);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex<T>> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
        for _ in 0..2 {
            for b in &cols {
                let proj = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= y * proj;
                }
            }
        }
        let n = norm_sqr(&v).sqrt();
        // a draw inside the span of earlier columns has probability zero
        if n > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(&cols)
}

/// Parameters `(x, y)` of the `2 x 3` family, with `x >= y >= 0` and `x + y <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams<T> {
    x: T,
    y: T,
}

impl<T: Real> FamilyParams<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        let slack = T::lit(1e-12);
        if !(x.is_finite() && y.is_finite()) || y < T::zero() || x < y || x + y > T::one() + slack {
            return Err(Error::InvalidParams(format!(
                "family parameters (x, y) = ({x}, {y}) need x >= y >= 0 and x + y <= 1"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn y(&self) -> T {
        self.y
    }

    /// `x - sqrt((1 - x + 2y)(1 - x - y)) / 3`, the concurrence of the
    /// projection onto the span of the first two basis vectors of the
    /// second factor.
    pub fn c_tilde(&self) -> T {
        let (x, y) = (self.x, self.y);
        let two = T::lit(2.0);
        let prod = ((T::one() - x + two * y) * (T::one() - x - y)).max(T::zero());
        x - prod.sqrt() / T::lit(3.0)
    }

    /// `16 x <= -2 - y + 3 sqrt(4 + 4y - 7y^2)`.
    pub fn is_separable_region(&self) -> bool {
        let (x, y) = (self.x, self.y);
        let disc = (T::lit(4.0) + T::lit(4.0) * y - T::lit(7.0) * y * y).max(T::zero());
        T::lit(16.0) * x <= -T::lit(2.0) - y + T::lit(3.0) * disc.sqrt()
    }

    /// `x <= 1 - (3 sqrt 5 - 1) y / 2`.
    pub fn is_exact_region(&self) -> bool {
        let coeff = (T::lit(3.0) * T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
        self.x <= T::one() - coeff * self.y
    }
}

/// `(|00> + |11>) / sqrt 2` on `2 x 3`.
pub fn family_psi1<T: Real>() -> PureState<T> {
    family_vector(&[(0, 0), (1, 1)])
}

/// `(|02> + |10>) / sqrt 2` on `2 x 3`.
pub fn family_psi2<T: Real>() -> PureState<T> {
    family_vector(&[(0, 2), (1, 0)])
}

fn family_vector<T: Real>(terms: &[(usize, usize)]) -> PureState<T> {
    let dims = BipartiteDims::qubit_by(3).expect("2x3");
    let mut amps = vec![Complex::zero(); 6];
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    for &(i, j) in terms {
        amps[dims.index(i, j)] = Complex::new(s, T::zero());
    }
    PureState::new(amps, dims).expect("valid family vector")
}

/// `x |psi1><psi1| + y |psi2><psi2| + (1 - x - y) 1/6`.
pub fn family_state<T: Real>(p: FamilyParams<T>) -> DensityMatrix<T> {
    let dims = BipartiteDims::qubit_by(3).expect("2x3");
    let noise = ((T::one() - p.x - p.y) / T::lit(6.0)).max(T::zero());
    let m = &(&family_psi1::<T>().projector().scale(p.x)
        + &family_psi2::<T>().projector().scale(p.y))
        + &ComplexMatrix::identity(6).scale(noise);
    DensityMatrix::new(m, dims).expect("family state is a valid density matrix")
}

/// Analytic status of a family state's concurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyClass<T> {
    /// Separable, concurrence zero.
    Separable,
    /// Concurrence equals `c_tilde` exactly.
    Exact(T),
    /// Outside the proven regime; `c_tilde` is only a lower value when positive.
    Unknown { lower: Option<T> },
}

impl<T> FamilyClass<T> {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyClass::Separable => "separable",
            FamilyClass::Exact(_) => "exact",
            FamilyClass::Unknown { .. } => "unknown",
        }
    }
}

pub fn family_exact_concurrence<T: Real>(p: FamilyParams<T>) -> FamilyClass<T> {
    let c = p.c_tilde();
    if p.is_separable_region() {
        FamilyClass::Separable
    } else if p.is_exact_region() && c > T::zero() {
        FamilyClass::Exact(c)
    } else {
        FamilyClass::Unknown {
            lower: (c > T::zero()).then_some(c),
        }
    }
}
