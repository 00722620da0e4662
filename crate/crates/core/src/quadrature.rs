//! Gauss–Legendre quadrature with square-root endpoint handling.
//!
//! Integrands in this crate typically behave like `(b - x)^{-1/2}` or
//! `(b - x)^{1/2}` at the rim of a disk (the critical profile meets the
//! plane `t = 0` vertically). On a panel touching such an endpoint the
//! substitution `x = b - (b - a) τ²` turns the integrand into a smooth
//! function of `τ`, after which plain Gauss–Legendre converges
//! geometrically. The substitution is harmless for smooth integrands, so
//! callers may request it unconditionally.

use std::sync::OnceLock;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `order`-point rule by Newton iteration on the Legendre
    /// three-term recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = order.div_ceil(2);
        let nf = order as f64;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 64-point rule.
pub fn gl64() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(64))
}

/// The shared 16-point rule, used for short sub-intervals.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Which ends of an interval carry a square-root type singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoints {
    Regular,
    Left,
    Right,
    Both,
}

impl Endpoints {
    fn left(self) -> bool {
        matches!(self, Endpoints::Left | Endpoints::Both)
    }
    fn right(self) -> bool {
        matches!(self, Endpoints::Right | Endpoints::Both)
    }
}

/// Result of a quadrature with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Integrates `f` over a single panel `[a, b]`, substituting `x = a + (b-a)τ²`
/// and/or `x = b - (b-a)τ²` at flagged endpoints.
pub fn panel<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    ends: Endpoints,
    mut f: F,
) -> f64 {
    panel_dyn(rule, a, b, ends, &mut f)
}

fn panel_dyn(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    ends: Endpoints,
    f: &mut dyn FnMut(f64) -> f64,
) -> f64 {
    let len = b - a;
    match (ends.left(), ends.right()) {
        (false, false) => rule.integrate(a, b, &mut *f),
        (false, true) => rule.integrate(0.0, 1.0, |tau| f(b - len * tau * tau) * 2.0 * len * tau),
        (true, false) => rule.integrate(0.0, 1.0, |tau| f(a + len * tau * tau) * 2.0 * len * tau),
        (true, true) => {
            let mid = 0.5 * (a + b);
            panel_dyn(rule, a, mid, Endpoints::Left, f)
                + panel_dyn(rule, mid, b, Endpoints::Right, f)
        }
    }
}

/// Composite rule over `panels` equal panels; only the outermost panels
/// receive the endpoint substitution.
pub fn composite<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    ends: Endpoints,
    mut f: F,
) -> f64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == panels { b } else { lo + width };
        let first = k == 0 && ends.left();
        let last = k + 1 == panels && ends.right();
        let local = match (first, last) {
            (true, true) => Endpoints::Both,
            (true, false) => Endpoints::Left,
            (false, true) => Endpoints::Right,
            (false, false) => Endpoints::Regular,
        };
        acc += panel_dyn(rule, lo, hi, local, &mut f);
    }
    acc
}

/// Composite 64-point rule with an error estimate from halving the panel count.
pub fn integrate<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    ends: Endpoints,
    mut f: F,
) -> Estimate {
    let rule = gl64();
    let fine = composite(rule, a, b, panels.max(2), ends, &mut f);
    let coarse = composite(rule, a, b, (panels / 2).max(1), ends, &mut f);
    Estimate {
        value: fine,
        error: (fine - coarse).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        // degree 15 is the limit for 8 nodes
        let v = rule.integrate(0.0, 1.0, |x| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sixty_four_point_nodes_are_sorted_and_inside() {
        let rule = gl64();
        assert_eq!(rule.order(), 64);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes().iter().all(|x| x.abs() < 1.0));
    }

    #[test]
    fn inverse_sqrt_endpoint_is_resolved() {
        // ∫_0^1 dx / sqrt(1 - x) = 2
        let est = integrate(0.0, 1.0, 4, Endpoints::Right, |x| 1.0 / (1.0 - x).sqrt());
        assert!((est.value - 2.0).abs() < 1e-12, "{}", est.value);
        // ∫_0^1 r^2 / sqrt(1 - r^2) dr = π/4
        let est = integrate(0.0, 1.0, 4, Endpoints::Right, |r| {
            r * r / (1.0 - r * r).sqrt()
        });
        assert!((est.value - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn both_endpoints() {
        // ∫_0^1 dx / sqrt(x (1-x)) = π
        let est = integrate(0.0, 1.0, 2, Endpoints::Both, |x| {
            1.0 / (x * (1.0 - x)).sqrt()
        });
        assert!((est.value - std::f64::consts::PI).abs() < 1e-12);
    }
}
