//! Float-function shim: std intrinsics when available, libm otherwise.
//!
//! Modules that need `sqrt`, `atan2` or `ln` import this trait under
//! `cfg(not(feature = "std"))`; with std enabled the inherent methods win
//! and the shim compiles to nothing. (`abs` needs no shim: core provides
//! it directly.)

#[cfg(not(feature = "std"))]
pub(crate) trait FloatShim {
    fn sqrt(self) -> Self;
    fn atan2(self, other: Self) -> Self;
    fn ln(self) -> Self;
}

#[cfg(not(feature = "std"))]
impl FloatShim for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }

    #[inline]
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }

    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
}
