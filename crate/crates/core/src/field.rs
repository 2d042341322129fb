//! Flat storage for scalar fields sampled on a tensor-product grid.

use std::ops::{Index, IndexMut};

/// Scalar field on an `nu × nv` tensor grid, stored row-major in the slow
/// coordinate `u` (node `(iu, iv)` lives at `iu * nv + iv`).
#[derive(Debug, Clone, PartialEq)]
pub struct Field2 {
    pub nu: usize,
    pub nv: usize,
    pub data: Vec<f64>,
}

impl Field2 {
    pub fn zeros(nu: usize, nv: usize) -> Self {
        Field2 { nu, nv, data: vec![0.0; nu * nv] }
    }

    pub fn constant(nu: usize, nv: usize, value: f64) -> Self {
        Field2 { nu, nv, data: vec![value; nu * nv] }
    }

    pub fn from_fn(nu: usize, nv: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(nu * nv);
        for iu in 0..nu {
            for iv in 0..nv {
                data.push(f(iu, iv));
            }
        }
        Field2 { nu, nv, data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Pointwise combination of two fields.
    pub fn zip_with(&self, other: &Field2, mut f: impl FnMut(f64, f64) -> f64) -> Field2 {
        debug_assert_eq!(self.len(), other.len());
        Field2 {
            nu: self.nu,
            nv: self.nv,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Field2 {
        Field2 { nu: self.nu, nv: self.nv, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    pub fn scale(&self, k: f64) -> Field2 {
        self.map(|a| k * a)
    }

    pub fn add(&self, other: &Field2) -> Field2 {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field2) -> Field2 {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field2) -> Field2 {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, &a| m.max(a.abs()))
    }

    /// Index of the first NaN entry, if any.
    pub fn find_nan(&self) -> Option<usize> {
        self.data.iter().position(|a| a.is_nan())
    }
}

impl Index<(usize, usize)> for Field2 {
    type Output = f64;
    fn index(&self, (iu, iv): (usize, usize)) -> &f64 {
        &self.data[iu * self.nv + iv]
    }
}

impl IndexMut<(usize, usize)> for Field2 {
    fn index_mut(&mut self, (iu, iv): (usize, usize)) -> &mut f64 {
        &mut self.data[iu * self.nv + iv]
    }
}

/// Symmetric 2×2 matrix `[a b; b c]` used for the (t,z) block of reduced tensors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 { a: 0.0, b: 0.0, c: 0.0 };
    pub const IDENTITY: Sym2 = Sym2 { a: 1.0, b: 0.0, c: 1.0 };

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    pub fn inv(&self) -> Sym2 {
        let d = self.det();
        Sym2 { a: self.c / d, b: -self.b / d, c: self.a / d }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0.0 && self.det() > 0.0
    }

    pub fn scale(&self, k: f64) -> Sym2 {
        Sym2 { a: k * self.a, b: k * self.b, c: k * self.c }
    }

    pub fn add(&self, o: &Sym2) -> Sym2 {
        Sym2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c }
    }

    /// Component by symmetric index pair (0 = t, 1 = z).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.a,
            (1, 1) => self.c,
            _ => self.b,
        }
    }

    /// `tr(G⁻¹ H G⁻¹ K)` with `self` as `G⁻¹` is not what this computes; this
    /// is the plain matrix product trace `tr(self · o)` for symmetric inputs.
    pub fn dot(&self, o: &Sym2) -> f64 {
        self.a * o.a + 2.0 * self.b * o.b + self.c * o.c
    }
}

/// Simple ordinary least squares for `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Observed convergence order from errors on a refinement ladder with ratio-2
/// steps: least-squares slope of log2(err) against rung index, negated.
pub fn observed_order(errors: &[f64]) -> f64 {
    let xs: Vec<f64> = (0..errors.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(1e-300).log2()).collect();
    let (slope, _) = linear_fit(&xs, &ys);
    -slope
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_indexing_round_trip() {
        let mut f = Field2::zeros(3, 4);
        f[(2, 1)] = 7.5;
        assert_eq!(f[(2, 1)], 7.5);
        assert_eq!(f.data[2 * 4 + 1], 7.5);
    }

    #[test]
    fn sym2_inverse() {
        let m = Sym2 { a: 2.0, b: 0.5, c: 3.0 };
        let inv = m.inv();
        let prod_a = m.a * inv.a + m.b * inv.b;
        let prod_b = m.a * inv.b + m.b * inv.c;
        assert!((prod_a - 1.0).abs() < 1e-14);
        assert!(prod_b.abs() < 1e-14);
    }

    #[test]
    fn order_fit_recovers_two() {
        let errs = [1.0e-2, 2.5e-3, 6.25e-4];
        assert!((observed_order(&errs) - 2.0).abs() < 1e-12);
    }
}
