/// Bisection for a sign change of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `rel_tol * max(|a|, |b|, tiny)`.
/// Returns `None` when `f(a)` and `f(b)` share a strict sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Option<f64> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        if hi - lo <= rel_tol * scale || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bisection on a boolean predicate that is `false` at `lo` and `true` at `hi`.
/// Returns the final `(lo, hi)` bracket once `hi - lo <= abs_tol`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(
    mut pred: P,
    mut lo: f64,
    mut hi: f64,
    abs_tol: f64,
) -> (f64, f64) {
    while hi - lo > abs_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    abs_tol: f64,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        if (b - a).abs() <= abs_tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn predicate_bracket() {
        let (lo, hi) = bisect_predicate(|c| c > 0.3, 0.0, 1.0, 1e-10);
        assert!(lo <= 0.3 && hi > 0.3 && hi - lo <= 1e-10);
    }

    #[test]
    fn golden_parabola() {
        let (x, v) = golden_section_min(|x| (x - 0.7) * (x - 0.7) + 1.0, 0.0, 2.0, 1e-9);
        assert!((x - 0.7).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-15);
    }
}
