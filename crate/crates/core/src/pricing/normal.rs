use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF through `erfc`, accurate in both tails.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Probabilists' Hermite polynomial `He_k(z)`.
pub fn hermite_he(k: usize, z: f64) -> f64 {
    let (mut a, mut b) = (1.0, z);
    match k {
        0 => a,
        1 => b,
        _ => {
            for j in 1..k {
                let c = z * b - j as f64 * a;
                a = b;
                b = c;
            }
            b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_values() {
        assert_eq!(norm_cdf(0.0), 0.5);
        // Phi(1.96), Phi(-8) from high-precision tables
        assert!((norm_cdf(1.96) - 0.975_002_104_851_780_2).abs() < 1e-15);
        assert!((norm_cdf(-8.0) / 6.220_960_574_271_784e-16 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn hermite_low_orders() {
        let z = 0.7;
        assert_eq!(hermite_he(0, z), 1.0);
        assert_eq!(hermite_he(1, z), z);
        assert!((hermite_he(2, z) - (z * z - 1.0)).abs() < 1e-15);
        assert!((hermite_he(3, z) - (z.powi(3) - 3.0 * z)).abs() < 1e-15);
        assert!((hermite_he(4, z) - (z.powi(4) - 6.0 * z * z + 3.0)).abs() < 1e-15);
    }
}
