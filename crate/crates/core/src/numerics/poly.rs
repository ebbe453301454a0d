use nalgebra::DMatrix;

/// Polynomial with coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Multiplies by `(x + shift)`.
    pub fn mul_linear(&self, shift: f64) -> Polynomial {
        let mut out = vec![0.0; self.0.len() + 1];
        for (k, &c) in self.0.iter().enumerate() {
            out[k] += shift * c;
            out[k + 1] += c;
        }
        Polynomial(out)
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.0.len().max(other.0.len());
        Polynomial(
            (0..len)
                .map(|k| self.0.get(k).unwrap_or(&0.0) + other.0.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    /// Real roots from the eigenvalues of the companion matrix, polished by Newton steps.
    ///
    /// Eigenvalues with `|Im| > imag_tol · max(1, |Re|)` are discarded.
    pub fn real_roots(&self, imag_tol: f64) -> Vec<f64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = self.0[d];
        let mut companion = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.0[i] / lead;
        }
        let deriv = self.derivative();
        let mut roots: Vec<f64> = companion
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() <= imag_tol * z.re.abs().max(1.0))
            .map(|z| {
                let mut x = z.re;
                for _ in 0..8 {
                    let dp = deriv.eval(x);
                    if dp == 0.0 {
                        break;
                    }
                    let step = self.eval(x) / dp;
                    x -= step;
                    if step.abs() <= 1e-16 * x.abs().max(1.0) {
                        break;
                    }
                }
                x
            })
            .collect();
        roots.sort_by(f64::total_cmp);
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        // (x - 1)(x + 3) = x² + 2x - 3
        let p = Polynomial(vec![-3.0, 2.0, 1.0]);
        let r = p.real_roots(1e-10);
        assert_eq!(r.len(), 2);
        assert!((r[0] + 3.0).abs() < 1e-14 && (r[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_pair_dropped() {
        let p = Polynomial(vec![1.0, 0.0, 1.0]);
        assert!(p.real_roots(1e-10).is_empty());
    }

    #[test]
    fn mul_linear_builds_products() {
        let p = Polynomial(vec![1.0]).mul_linear(2.0).mul_linear(-5.0);
        assert_eq!(p.0, vec![-10.0, -3.0, 1.0]);
        assert_eq!(p.degree(), 2);
    }
}
