//! Gauss–Legendre quadrature nodes and weights.

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule of the given order, computed by Newton iteration on the
    /// Legendre polynomial from the Chebyshev initial guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map [-1,1] -> [0,1]
            nodes[i] = 0.5 * (1.0 - x);
            weights[i] = 0.5 * w;
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[n - 1 - i] = 0.5 * w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        // degree 15 is exact for an 8-point rule
        let val = gl.integrate(|x| x.powi(15));
        assert!((val - 1.0 / 16.0).abs() < 1e-14);
        let val = gl.integrate(|x| 3.0 * x * x - x + 0.25);
        assert!((val - (1.0 - 0.5 + 0.25)).abs() < 1e-14);
    }

    #[test]
    fn integrates_exponential() {
        let gl = GaussLegendre::new(24);
        let val = gl.integrate(|x| (2.6 * x).exp());
        let exact = ((2.6f64).exp() - 1.0) / 2.6;
        assert!((val - exact).abs() < 1e-13);
    }

    #[test]
    fn weights_sum_to_one() {
        for order in [1usize, 2, 5, 17, 64] {
            let gl = GaussLegendre::new(order);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "order {order}");
        }
    }
}
