const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `tol` or after `max_iter`
/// reductions. Returns the best abscissa seen and its value.
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
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
    let candidates = [(a, f(a)), (c, fc), (d, fd), (b, f(b))];
    candidates
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let (x, fx) = golden_section_min(|x| (x - 1.3) * (x - 1.3) + 2.0, -5.0, 5.0, 1e-12, 200);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn v_shape_located_to_rounding() {
        let (x, _) = golden_section_min(|x| (x - 0.7).abs(), 0.0, 2.0, 1e-15, 300);
        assert!((x - 0.7).abs() < 1e-14);
    }

    #[test]
    fn monotone_function_goes_to_edge() {
        let (x, _) = golden_section_min(|x| -x, 0.0, 1.0, 1e-14, 300);
        assert_eq!(x, 1.0);
    }
}
