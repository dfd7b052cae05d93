use alloc::vec::Vec;

/// Dense real polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(Vec::new());
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Self::new(out)
    }

    /// Coefficients of `w -> P(x0 + w)`, i.e. the Taylor expansion at `x0`.
    pub fn shifted(&self, x0: f64) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division
        for k in 0..n {
            for j in (k..n - 1).rev() {
                c[j] += x0 * c[j + 1];
            }
        }
        Self::new(c)
    }

    /// `(P(x) - P(0)) / x` as a polynomial.
    pub fn drop_constant_divided(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(Vec::new());
        }
        Self::new(self.coeffs[1..].to_vec())
    }

    /// Polynomial in `w` equal to `(P(x0) - P(x0 - w)) / w`.
    ///
    /// Evaluating this directly avoids the cancellation in the difference when
    /// `w` is small.
    pub fn backward_difference_quotient(&self, x0: f64) -> Self {
        let shifted = self.shifted(x0);
        // P(x0 - w) = sum a_k (-w)^k, so P(x0) - P(x0 - w) = -sum_{k>=1} a_k (-1)^k w^k
        let coeffs = shifted
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &a)| if k % 2 == 1 { a } else { -a })
            .collect();
        Self::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn horner_and_calculus() {
        // (1 - p)(p - 0.25) = -0.25 + 1.25 p - p^2
        let f = Polynomial::new(vec![-0.25, 1.25, -1.0]);
        assert_eq!(f.eval(0.25), 0.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert!((f.eval(0.5) - 0.125).abs() < 1e-15);
        let df = f.derivative();
        assert_eq!(df.coeffs(), &[1.25, -2.0]);
        let big_f = f.antiderivative();
        assert!((big_f.eval(1.0) - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn shift_matches_direct_evaluation() {
        let f = Polynomial::new(vec![0.3, -1.0, 2.0, 0.5]);
        let g = f.shifted(0.7);
        for &w in &[-0.4, 0.0, 0.2, 1.3] {
            assert!((g.eval(w) - f.eval(0.7 + w)).abs() < 1e-13);
        }
    }

    #[test]
    fn difference_quotient() {
        let f = Polynomial::new(vec![0.0, -0.25, 0.625, -1.0 / 3.0]);
        let x0 = 0.8;
        let q = f.backward_difference_quotient(x0);
        for &w in &[1e-3, 0.1, 0.5] {
            let direct = (f.eval(x0) - f.eval(x0 - w)) / w;
            assert!((q.eval(w) - direct).abs() < 1e-12, "w={w}");
        }
        // w -> 0 limit is P'(x0)
        assert!((q.eval(0.0) - f.derivative().eval(x0)).abs() < 1e-14);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 0);
        assert!(Polynomial::new(vec![]).is_zero());
    }
}
