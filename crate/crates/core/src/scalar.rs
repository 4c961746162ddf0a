//! Coefficient abstraction shared by operators and polynomials.
//!
//! Everything downstream is generic over [`Scalar`] so that the same code
//! path produces exact rational systems (when the Hamiltonian is rational)
//! and floating-point ones otherwise. Complex amplitudes go through the
//! `Complex64` instance.

use num::complex::Complex64;
use num::{BigRational, FromPrimitive, Signed};
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational coefficient type used throughout the exact code paths.
pub type Rational = BigRational;

/// Ring/field operations needed by the generic operator and polynomial code.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_f64(x: f64) -> Self;

    /// Absolute value as f64, used for tolerance checks and pruning.
    fn magnitude(&self) -> f64;

    /// True for exact arithmetic (rationals); drives pruning behavior.
    fn is_exact() -> bool;

    /// Lossy conversion for handing exact data to the numeric solvers.
    fn to_c64(&self) -> Complex64;

    /// Whether to drop this coefficient after term collection.
    fn prune(&self) -> bool {
        if Self::is_exact() {
            self.is_zero()
        } else {
            self.magnitude() < 1e-13
        }
    }
}

impl Scalar for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn from_f64(x: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(x).expect("finite float")
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64_lossy()
    }

    fn is_exact() -> bool {
        true
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64_lossy(), 0.0)
    }
}

/// `BigRational::to_f64` via integer division; good to ~1 ulp for our ranges.
trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        use num::ToPrimitive;
        self.to_f64().unwrap_or_else(|| {
            // fall back to a scaled division for huge numerators/denominators
            let (n, d) = (self.numer(), self.denom());
            let shift = (n.bits() as i64 - d.bits() as i64).max(0);
            let nf = (n >> shift).to_f64().unwrap_or(f64::MAX);
            let df = d.to_f64().unwrap_or(f64::MAX);
            nf / df * 2f64.powi(shift as i32)
        })
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_exact() -> bool {
        false
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_exact() -> bool {
        false
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}
