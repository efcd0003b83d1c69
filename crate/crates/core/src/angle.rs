//! Angle helpers shared by the model and the controllers.

use std::f64::consts::PI;

/// Sine and cosine with the argument reduced by the nearest multiple of `PI`.
///
/// The `PI` constant is treated as exact, so `sin_cos(PI)` is `(0.0, -1.0)`
/// rather than `(1.2e-16, -1.0)`. This keeps the downward equilibrium of the
/// pendulum an exact fixed point of the closed loop. Away from multiples of
/// `PI` the result agrees with `f64::sin_cos` to within the ulp of the input.
pub fn sin_cos(a: f64) -> (f64, f64) {
    let n = (a / PI).round();
    let r = (-n).mul_add(PI, a);
    let (s, c) = r.sin_cos();
    if n.rem_euclid(2.0) == 1.0 {
        (-s, -c)
    } else {
        (s, c)
    }
}

/// Wraps an angle into `(-PI, PI]`; `-PI` maps to `PI`.
pub fn wrap(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let w = a - two_pi * ((a - PI) / two_pi).ceil();
    // rounding in the subtraction can land exactly on -PI
    if w <= -PI {
        w + two_pi
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiples_of_pi_are_exact() {
        assert_eq!(sin_cos(0.0), (0.0, 1.0));
        assert_eq!(sin_cos(PI), (0.0, -1.0));
        assert_eq!(sin_cos(-PI), (0.0, -1.0));
        assert_eq!(sin_cos(2.0 * PI), (0.0, 1.0));
        assert_eq!(sin_cos(3.0 * PI).1, -1.0);
    }

    #[test]
    fn matches_std_away_from_multiples() {
        for i in -2000..2000 {
            let a = i as f64 * 0.0137;
            let (s, c) = sin_cos(a);
            assert!((s - a.sin()).abs() < 1e-14, "{a}");
            assert!((c - a.cos()).abs() < 1e-14, "{a}");
        }
    }

    #[test]
    fn wrap_convention() {
        assert_eq!(wrap(PI), PI);
        assert_eq!(wrap(-PI), PI);
        assert!((wrap(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
        assert!((wrap(-1.5 * PI) - 0.5 * PI).abs() < 1e-15);
        assert_eq!(wrap(0.0), 0.0);
        assert!((wrap(7.0 * PI) - PI).abs() < 1e-14);
    }

    #[test]
    fn wrap_stays_in_range() {
        for i in -5000..5000 {
            let a = i as f64 * 0.01234;
            let w = wrap(a);
            assert!(w > -PI && w <= PI, "{a} -> {w}");
            assert!(
                ((a - w) / (2.0 * PI)).fract().abs() < 1e-9
                    || ((a - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9
            );
        }
    }
}
