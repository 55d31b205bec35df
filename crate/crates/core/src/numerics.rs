//! Small scalar helpers shared by feature extraction and the metrology sweeps.

/// Root of `f` inside a sign-changing bracket `[a, b]` (Illinois variant of
/// regula falsi). Returns `None` when `f(a)` and `f(b)` share a sign.
pub(crate) fn bracketed_root<F, E>(mut f: F, mut a: f64, mut b: f64) -> Result<Option<f64>, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    let tol = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300);
    let mut side = 0i8;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        // fall back to bisection if the secant step escapes the bracket
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) {
            c
        } else {
            0.5 * (a + b)
        };
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() <= tol {
            return Ok(Some(c));
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= tol {
            break;
        }
    }
    Ok(Some(if fa.abs() < fb.abs() { a } else { b }))
}

/// Linear interpolation of `ys` sampled on increasing `xs`.
pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return None;
    }
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return Some(ys[0]);
    }
    if k == xs.len() {
        return Some(ys[xs.len() - 1]);
    }
    let (x0, x1) = (xs[k - 1], xs[k]);
    let w = (x - x0) / (x1 - x0);
    Some(ys[k - 1] + w * (ys[k] - ys[k - 1]))
}

/// Vertex `(x, y)` of the parabola through three points with distinct abscissae.
pub(crate) fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<(f64, f64)> {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if a == 0.0 || !a.is_finite() {
        return None;
    }
    let b = d01 - a * (x0 + x1);
    let xv = -b / (2.0 * a);
    let yv = y1 + (xv - x1) * (d01 + a * (xv - x0));
    Some((xv, yv))
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r: Result<_, ()> = bracketed_root(|x| Ok(x * x * x - 2.0), 0.0, 3.0);
        let r = r.unwrap().unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
        let none: Result<_, ()> = bracketed_root(|x| Ok(x * x + 1.0), -1.0, 1.0);
        assert!(none.unwrap().is_none());
    }

    #[test]
    fn parabola_vertex_recovers_quadratic() {
        let f = |x: f64| 3.0 * (x - 0.7) * (x - 0.7) - 2.0;
        let (xv, yv) = parabola_vertex((0.1, f(0.1)), (0.5, f(0.5)), (1.3, f(1.3))).unwrap();
        assert!((xv - 0.7).abs() < 1e-12);
        assert!((yv + 2.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation_and_grid() {
        let xs = linspace(0.0, 1.0, 11);
        assert_eq!(xs.len(), 11);
        assert_eq!(xs[10], 1.0);
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((interpolate(&xs, &ys, 0.55).unwrap() - 2.1).abs() < 1e-12);
        assert!(interpolate(&xs, &ys, 1.5).is_none());
    }
}
