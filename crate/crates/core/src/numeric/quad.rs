use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, in increasing order.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Pairwise summation with a tree fixed by index, so the result does not
/// depend on how the terms were produced.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

pub fn pairwise_sum_f64(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum_f64(a) + pairwise_sum_f64(b)
        }
    }
}

/// A quadrature node in the base of a projection.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseNode {
    pub point: Vec<Complex64>,
    /// Weight for the Lebesgue measure `dA` (1 for a zero-dimensional base).
    pub weight: f64,
}

/// Quadrature over the disc `|y − center| < radius` in one complex
/// variable: Gauss–Legendre in `s` with `r = radius·s³` (which clusters nodes
/// at the centre, where discriminants of the corpus vanish) and the
/// trapezoid rule in the angle. For an empty base the grid is one node.
pub fn base_grid(center: &[Complex64], radius: f64, n_radial: usize, n_angular: usize) -> Vec<BaseNode> {
    if center.is_empty() {
        return vec![BaseNode { point: Vec::new(), weight: 1.0 }];
    }
    assert_eq!(center.len(), 1, "base grids are implemented for one complex variable");
    let c = center[0];
    let mut out = Vec::with_capacity(n_radial * n_angular);
    let dtheta = 2.0 * std::f64::consts::PI / n_angular as f64;
    for (x, w) in gauss_legendre(n_radial) {
        let s = 0.5 * (x + 1.0);
        let r = radius * s * s * s;
        let dr = 3.0 * radius * s * s * 0.5 * w;
        for k in 0..n_angular {
            let theta = dtheta * (k as f64 + 0.5);
            out.push(BaseNode { point: vec![c + Complex64::from_polar(r, theta)], weight: dr * r * dtheta });
        }
    }
    out
}
