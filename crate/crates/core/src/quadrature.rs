//! Gauss–Legendre rules and their composite extension.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    ///
    /// Roots of `P_n` are found by Newton iteration from the Chebyshev-like
    /// initial guess `cos(π(k - 1/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for k in 0..m {
            let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule applied on equal panels no wider than `panel_width`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    rule: GaussLegendre,
    panel_width: f64,
}

impl CompositeRule {
    pub fn new(nodes_per_panel: usize, panel_width: f64) -> Self {
        assert!(panel_width > 0.0, "panel width must be positive");
        Self { rule: GaussLegendre::new(nodes_per_panel), panel_width }
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.rule.len()
    }

    pub fn panel_width(&self) -> f64 {
        self.panel_width
    }

    /// `∫_a^b f` for `a <= b`; zero on an empty interval.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if b <= a {
            return 0.0;
        }
        let panels = ((b - a) / self.panel_width).ceil().max(1.0) as usize;
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * width;
                let hi = if k + 1 == panels { b } else { lo + width };
                self.rule.integrate(lo, hi, &mut f)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..=40 {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        for n in 1..=20 {
            let r = GaussLegendre::new(n);
            for deg in 0..2 * n {
                let got = r.integrate(0.0, 1.0, |x| x.powi(deg as i32));
                let want = 1.0 / (deg as f64 + 1.0);
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn known_three_point_rule() {
        let r = GaussLegendre::new(3);
        let x = (0.6f64).sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15);
        assert_eq!(r.nodes()[1], 0.0);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[2] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_are_sorted_and_inside() {
        let r = GaussLegendre::new(16);
        assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes().iter().all(|x| x.abs() < 1.0));
    }

    #[test]
    fn composite_exponential_integral() {
        let c = CompositeRule::new(16, 0.5);
        let got = c.integrate(0.0, 20.0, |x| (-x).exp());
        assert!((got - (1.0 - (-20.0f64).exp())).abs() < 1e-14);
        assert_eq!(c.integrate(1.0, 1.0, |_| 1.0), 0.0);
        assert_eq!(c.integrate(2.0, 1.0, |_| 1.0), 0.0);
    }
}
