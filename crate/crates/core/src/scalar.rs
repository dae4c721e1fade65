//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All matrix code is written against [`Real`], which is implemented for
//! `f32` and `f64`. Numerical tolerances depend on the precision of the
//! scalar, so each implementation carries its own [`Tolerances`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Precision-dependent thresholds used by validation and classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum entry of `|m - m^dagger|` accepted as Hermitian.
    pub herm: f64,
    /// Eigenvalues above `-psd` count as non-negative (and are clamped).
    pub psd: f64,
    /// Allowed deviation of a density-matrix trace from one.
    pub trace: f64,
    /// Maximum entry of `|U^dagger U - 1|` accepted as unitary.
    pub unitary: f64,
    /// Concurrences below this report as exactly zero.
    pub zero_clamp: f64,
    /// Threshold above which a 2x2 substate counts as entangled.
    pub entangled: f64,
    /// Minimum eigenvalue accepted for an exactness-certificate remainder.
    pub certificate: f64,
}

/// Floating-point scalar usable by the library.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn tolerances() -> Tolerances;

    /// Converts an `f64` literal; every `f64` is representable (possibly rounded).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts to every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    fn herm_tol() -> Self {
        Self::lit(Self::tolerances().herm)
    }

    fn psd_tol() -> Self {
        Self::lit(Self::tolerances().psd)
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances {
        Tolerances {
            herm: 1e-10,
            psd: 1e-10,
            trace: 1e-10,
            unitary: 1e-10,
            zero_clamp: 1e-12,
            entangled: 1e-7,
            certificate: 1e-9,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances {
        Tolerances {
            herm: 1e-5,
            psd: 1e-5,
            trace: 1e-5,
            unitary: 1e-5,
            zero_clamp: 1e-6,
            entangled: 1e-4,
            certificate: 1e-4,
        }
    }
}
