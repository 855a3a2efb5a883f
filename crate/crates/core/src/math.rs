//! Thin wrappers over `libm`, so that results are bit-identical with and
//! without `std`.

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `x` reduced to `[0, 2π)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    let tau = crate::TAU;
    let r = x - tau * floor(x / tau);
    if r >= tau || r < 0.0 {
        0.0
    } else {
        r
    }
}

/// `x` reduced to `(-π, π]`.
#[inline]
pub fn wrap_signed(x: f64) -> f64 {
    let tau = crate::TAU;
    let r = x - tau * round(x / tau);
    if r <= -core::f64::consts::PI {
        r + tau
    } else {
        r
    }
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> crate::Point {
    let (s, c) = sin_cos(theta);
    crate::Point::new(c, s)
}
