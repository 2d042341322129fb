//! Coordinate charts for the planar-symmetry reduction.
//!
//! Fields live on the half-plane `{(t, z) : z > 0}`; the remaining `n − 2`
//! directions are symmetric. Two chart kinds are supported:
//!
//! * a polar annulus chart `(s, α)` with `t = s cos α`, `z = s sin α`,
//!   covering `A_{r_in, r_out}` — the gluing domain;
//! * an axis-aligned rectangle in `(t, z)` — stripe and corner domains for
//!   the inequality and identity suites.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Chart of the reduced half-plane together with the symbolic dimension.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChartSpec {
    /// Dimension n ≥ 3 of the underlying manifold (kept symbolic: it enters
    /// traces, divergences and the volume density z⁻ⁿ).
    pub n: usize,
    pub kind: ChartKind,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum ChartKind {
    /// Half-annulus `r_in ≤ s ≤ r_out`, `α ∈ [α_min, π − α_min]` in polar
    /// coordinates about a conformal-boundary point. `B_δ` means
    /// `|θ|² + z² < δ²` (squared radius on the right).
    Annulus { r_in: f64, r_out: f64 },
    /// Rectangle `[t0, t1] × [z0, z1]` in the half-plane.
    Rect { t0: f64, t1: f64, z0: f64, z1: f64 },
}

impl ChartSpec {
    /// The standard gluing annulus A_{1,4}.
    pub fn annulus(n: usize) -> Result<Self> {
        Self::annulus_with_radii(n, 1.0, 4.0)
    }

    pub fn annulus_with_radii(n: usize, r_in: f64, r_out: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config(format!("dimension n = {n} must be ≥ 3")));
        }
        if !(r_in > 0.0 && r_in < r_out) {
            return Err(Error::Config(format!(
                "annulus radii must satisfy 0 < r_in < r_out, got ({r_in}, {r_out})"
            )));
        }
        Ok(ChartSpec { n, kind: ChartKind::Annulus { r_in, r_out } })
    }

    pub fn rect(n: usize, t0: f64, t1: f64, z0: f64, z1: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config(format!("dimension n = {n} must be ≥ 3")));
        }
        if !(t0 < t1 && 0.0 < z0 && z0 < z1) {
            return Err(Error::Config(format!(
                "rectangle must satisfy t0 < t1 and 0 < z0 < z1, got ({t0},{t1})×({z0},{z1})"
            )));
        }
        Ok(ChartSpec { n, kind: ChartKind::Rect { t0, t1, z0, z1 } })
    }

    /// Transverse multiplicity n − 2.
    pub fn m(&self) -> f64 {
        (self.n - 2) as f64
    }

    /// Map chart coordinates (u, v) to half-plane coordinates (t, z).
    pub fn to_tz(&self, u: f64, v: f64) -> (f64, f64) {
        match self.kind {
            ChartKind::Annulus { .. } => (u * v.cos(), u * v.sin()),
            ChartKind::Rect { .. } => (u, v),
        }
    }
}

/// First and second derivative of a scalar with respect to (t, z): the data
/// carried around when chart derivatives are converted by the chain rule.
#[derive(Debug, Clone, Copy, Default)]
pub struct Jet2 {
    pub val: f64,
    pub dt: f64,
    pub dz: f64,
    pub dtt: f64,
    pub dtz: f64,
    pub dzz: f64,
}

impl Jet2 {
    pub fn constant(val: f64) -> Jet2 {
        Jet2 { val, ..Default::default() }
    }

    pub fn scale(&self, k: f64) -> Jet2 {
        Jet2 { val: k * self.val, dt: k * self.dt, dz: k * self.dz, dtt: k * self.dtt, dtz: k * self.dtz, dzz: k * self.dzz }
    }

    pub fn add(&self, o: &Jet2) -> Jet2 {
        Jet2 {
            val: self.val + o.val,
            dt: self.dt + o.dt,
            dz: self.dz + o.dz,
            dtt: self.dtt + o.dtt,
            dtz: self.dtz + o.dtz,
            dzz: self.dzz + o.dzz,
        }
    }

    /// Leibniz product of two jets.
    pub fn mul(&self, o: &Jet2) -> Jet2 {
        Jet2 {
            val: self.val * o.val,
            dt: self.dt * o.val + self.val * o.dt,
            dz: self.dz * o.val + self.val * o.dz,
            dtt: self.dtt * o.val + 2.0 * self.dt * o.dt + self.val * o.dtt,
            dtz: self.dtz * o.val + self.dt * o.dz + self.dz * o.dt + self.val * o.dtz,
            dzz: self.dzz * o.val + 2.0 * self.dz * o.dz + self.val * o.dzz,
        }
    }

    /// Chain rule through a smooth scalar function with given derivatives
    /// f(w), f'(w), f''(w) evaluated at w = self.val.
    pub fn compose(&self, f: f64, fp: f64, fpp: f64) -> Jet2 {
        Jet2 {
            val: f,
            dt: fp * self.dt,
            dz: fp * self.dz,
            dtt: fp * self.dtt + fpp * self.dt * self.dt,
            dtz: fp * self.dtz + fpp * self.dt * self.dz,
            dzz: fp * self.dzz + fpp * self.dz * self.dz,
        }
    }

    /// Jet of the coordinate function t at (t, z).
    pub fn coord_t(t: f64) -> Jet2 {
        Jet2 { val: t, dt: 1.0, ..Default::default() }
    }

    /// Jet of the coordinate function z at (t, z).
    pub fn coord_z(z: f64) -> Jet2 {
        Jet2 { val: z, dz: 1.0, ..Default::default() }
    }

    /// Jet of z^p (z > 0).
    pub fn z_pow(z: f64, p: f64) -> Jet2 {
        let f = z.powf(p);
        Jet2 { val: f, dz: p * f / z, dzz: p * (p - 1.0) * f / (z * z), ..Default::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_rejects_bad_radii() {
        assert!(ChartSpec::annulus_with_radii(3, 4.0, 1.0).is_err());
        assert!(ChartSpec::annulus_with_radii(2, 1.0, 4.0).is_err());
    }

    #[test]
    fn jet_product_matches_hand_expansion() {
        // (t z)·(t + z) at (2, 3): value 6·5 = 30, ∂t = z(2t+z) = 21,
        // ∂z = t(t+2z) = 16, ∂tt = 2z = 6, ∂tz = 2t+2z = 10, ∂zz = 2t = 4.
        let tz = Jet2 { val: 6.0, dt: 3.0, dz: 2.0, dtt: 0.0, dtz: 1.0, dzz: 0.0 };
        let sum = Jet2 { val: 5.0, dt: 1.0, dz: 1.0, ..Default::default() };
        let p = tz.mul(&sum);
        assert_eq!(p.val, 30.0);
        assert_eq!(p.dt, 21.0);
        assert_eq!(p.dz, 16.0);
        assert_eq!(p.dtt, 6.0);
        assert_eq!(p.dtz, 10.0);
        assert_eq!(p.dzz, 4.0);
    }
}
