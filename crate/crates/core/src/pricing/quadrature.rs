//! Gauss-Hermite and Gauss-Legendre rules by Newton iteration on the
//! three-term recurrences.

use std::f64::consts::PI;

/// Nodes and weights of an n-point rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Rule for `int g(z) phi(z) dz` with `phi` the standard normal density.
pub fn gauss_hermite(n: usize) -> QuadratureRule {
    // physicists' rule for weight exp(-x^2), then z = sqrt(2) x
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let pim4 = PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = (j + 1) as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - (j as f64 / jf).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let s2 = 2f64.sqrt();
    let norm = PI.sqrt();
    let mut nodes: Vec<f64> = x.iter().map(|v| v * s2).collect();
    let mut weights: Vec<f64> = w.iter().map(|v| v / norm).collect();
    nodes.reverse();
    weights.reverse();
    QuadratureRule { nodes, weights }
}

/// Rule for `int_{-1}^{1} g(x) dx`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    QuadratureRule { nodes, weights }
}

impl QuadratureRule {
    /// Apply a Legendre rule on `[a, b]`.
    pub fn integrate_on(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_gaussian_moments() {
        for n in [64, 128] {
            let r = gauss_hermite(n);
            let moment = |k: i32| -> f64 { r.nodes.iter().zip(&r.weights).map(|(z, w)| w * z.powi(k)).sum() };
            assert!((moment(0) - 1.0).abs() < 1e-13);
            assert!(moment(1).abs() < 1e-13);
            assert!((moment(2) - 1.0).abs() < 1e-13);
            assert!((moment(4) - 3.0).abs() < 1e-12);
            assert!((moment(6) - 15.0).abs() < 1e-11);
            // E[exp(a Z)] = exp(a^2 / 2)
            let a = 0.8f64;
            let m: f64 = r.nodes.iter().zip(&r.weights).map(|(z, w)| w * (a * z).exp()).sum();
            assert!((m / (a * a / 2.0).exp() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let r = gauss_legendre(16);
        let s = r.integrate_on(0.0, 2.0, |x| x.powi(31));
        assert!((s / (2f64.powi(32) / 32.0) - 1.0).abs() < 1e-13);
        let s = r.integrate_on(-1.0, 3.0, |x| x.exp());
        assert!((s - (3f64.exp() - (-1f64).exp())).abs() < 1e-13);
    }
}
