//! Float helpers backed by `libm` so the crate stays `no_std`.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x.clamp(-1.0, 1.0))
}

/// Width of the window above 1 where `acosh` switches to its series.
pub const ACOSH_SERIES_WINDOW: f64 = 1e-8;

/// `acosh(1 + t)` for `t >= 0`, taking `t` directly so that nearby points
/// keep their precision. Uses `sqrt(2t) (1 - t/12 + 3t²/160)` for
/// `t <= ACOSH_SERIES_WINDOW`.
pub fn acosh_1p(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t <= ACOSH_SERIES_WINDOW {
        sqrt(2.0 * t) * (1.0 - t / 12.0 + 3.0 * t * t / 160.0)
    } else {
        libm::log1p(t + sqrt(t * (2.0 + t)))
    }
}

/// `x / sinh(x)`, finite at zero.
pub fn x_over_sinh(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        x / sinh(x)
    }
}

/// `x / tanh(x)`, finite at zero.
pub fn x_over_tanh(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 3.0
    } else {
        x / libm::tanh(x)
    }
}

/// `sinh(x) / x`, finite at zero.
pub fn sinh_over_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        sinh(x) / x
    }
}
