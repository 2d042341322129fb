//! Half-space-model AH geometry in the planar symmetry reduction.
//!
//! A metric is `g = z⁻² g̃` with `g̃` carried by four reduced components
//! (tt, tz, zz, ⊥). Catalog entries are closed-form; sampled entries hold
//! `g̃` on a grid. Catalog metrics may carry a Möbius transform of the
//! half-plane (scalings, boundary inversions), applied lazily and exactly.

pub mod calculus;

use serde::{Deserialize, Serialize};

use crate::chart::Jet2;
use crate::error::Error;
use crate::field::{Field2, Sym2};
use crate::grid::Grid;
use crate::Result;

/// Symmetric reduced 2-tensor: physical (unrescaled) coordinate components.
#[derive(Debug, Clone)]
pub struct ReducedSymTensor {
    pub tt: Field2,
    pub tz: Field2,
    pub zz: Field2,
    pub perp: Field2,
}

impl ReducedSymTensor {
    pub fn zeros(nu: usize, nv: usize) -> Self {
        ReducedSymTensor {
            tt: Field2::zeros(nu, nv),
            tz: Field2::zeros(nu, nv),
            zz: Field2::zeros(nu, nv),
            perp: Field2::zeros(nu, nv),
        }
    }

    pub fn map2(&self, o: &ReducedSymTensor, f: impl Fn(f64, f64) -> f64 + Copy) -> ReducedSymTensor {
        ReducedSymTensor {
            tt: self.tt.zip_with(&o.tt, f),
            tz: self.tz.zip_with(&o.tz, f),
            zz: self.zz.zip_with(&o.zz, f),
            perp: self.perp.zip_with(&o.perp, f),
        }
    }

    pub fn add(&self, o: &ReducedSymTensor) -> ReducedSymTensor {
        self.map2(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &ReducedSymTensor) -> ReducedSymTensor {
        self.map2(o, |a, b| a - b)
    }

    pub fn scale(&self, k: f64) -> ReducedSymTensor {
        ReducedSymTensor { tt: self.tt.scale(k), tz: self.tz.scale(k), zz: self.zz.scale(k), perp: self.perp.scale(k) }
    }

    /// Pointwise scaling by a scalar field.
    pub fn scale_field(&self, w: &Field2) -> ReducedSymTensor {
        ReducedSymTensor { tt: self.tt.mul(w), tz: self.tz.mul(w), zz: self.zz.mul(w), perp: self.perp.mul(w) }
    }

    pub fn block_at(&self, k: usize) -> Sym2 {
        Sym2 { a: self.tt.data[k], b: self.tz.data[k], c: self.zz.data[k] }
    }

    pub fn max_abs(&self) -> f64 {
        self.tt.max_abs().max(self.tz.max_abs()).max(self.zz.max_abs()).max(self.perp.max_abs())
    }
}

/// Reduced one-form (Y_t, Y_z). `perp_moment` is the coefficient p of the
/// transverse linear profile Y_A = p·θ^A carried by fields such as the
/// dilation Killing form; it feeds only the ⊥ row of S(Y) and divergences.
#[derive(Debug, Clone)]
pub struct ReducedVector {
    pub t: Field2,
    pub z: Field2,
    pub perp_moment: Option<Field2>,
}

impl ReducedVector {
    pub fn zeros(nu: usize, nv: usize) -> Self {
        ReducedVector { t: Field2::zeros(nu, nv), z: Field2::zeros(nu, nv), perp_moment: None }
    }

    pub fn moment_at(&self, k: usize) -> f64 {
        self.perp_moment.as_ref().map_or(0.0, |p| p.data[k])
    }

    pub fn max_abs(&self) -> f64 {
        self.t.max_abs().max(self.z.max_abs())
    }
}

/// Gaussian conformal bump profile: F = 1 + eps · z^sigma · exp(−((t−t0)/w)²).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ConformalBump {
    pub eps: f64,
    pub sigma: f64,
    pub t_center: f64,
    pub t_width: f64,
}

/// Transverse bump: g̃_⊥ multiplied by (1 + m·z^p).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct TransverseBump {
    pub m: f64,
    pub p: f64,
}

/// Möbius transform of the half-plane w = t + i z: w ↦ M(w) or M(w̄),
/// with real coefficients. Hyperbolic isometries in the reduction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct MobiusMap {
    /// [[a, b], [c, d]]: w ↦ (a·w + b)/(c·w + d).
    pub m: [[f64; 2]; 2],
    /// Conjugate w first (orientation-reversing maps such as inversions).
    pub conj: bool,
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap { m: [[1.0, 0.0], [0.0, 1.0]], conj: false };

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scaling(lambda: f64) -> MobiusMap {
        MobiusMap { m: [[lambda, 0.0], [0.0, 1.0]], conj: false }
    }

    /// Inversion about the boundary point (t0, 0):
    /// (t, z) ↦ ((t−t0), z)/((t−t0)² + z²), i.e. w ↦ 1/(w̄ − t0).
    pub fn inversion(t0: f64) -> MobiusMap {
        MobiusMap { m: [[0.0, 1.0], [1.0, -t0]], conj: true }
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let a = self.m;
        let b = other.m;
        let prod = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        MobiusMap { m: prod, conj: self.conj ^ other.conj }
    }

    pub fn is_identity(&self) -> bool {
        let m = self.m;
        !self.conj
            && m[0][1] == 0.0
            && m[1][0] == 0.0
            && (m[0][0] - m[1][1]).abs() <= 1e-15 * m[0][0].abs().max(m[1][1].abs())
    }

    /// Maps the upper half-plane to itself iff det sign and conjugation agree.
    pub fn preserves_half_plane(&self) -> bool {
        (self.det() > 0.0) ^ self.conj
    }

    /// Image of (t, z).
    pub fn apply(&self, t: f64, z: f64) -> (f64, f64) {
        let (wt, wz) = if self.conj { (t, -z) } else { (t, z) };
        let [[a, b], [c, d]] = self.m;
        let (nt, nz) = (a * wt + b, a * wz);
        let (dt, dz) = (c * wt + d, c * wz);
        let den = dt * dt + dz * dz;
        ((nt * dt + nz * dz) / den, (nz * dt - nt * dz) / den)
    }

    /// Complex derivatives φ', φ'', φ''' with respect to the (possibly
    /// conjugated) argument, evaluated at w or w̄.
    fn cderivs(&self, t: f64, z: f64) -> [(f64, f64); 3] {
        let (wt, wz) = if self.conj { (t, -z) } else { (t, z) };
        let c = self.m[1][0];
        let d = self.m[1][1];
        let det = self.det();
        // φ' = det/(cw+d)², φ'' = −2c·det/(cw+d)³, φ''' = 6c²·det/(cw+d)⁴.
        let den = (c * wt + d, c * wz);
        let den2 = cmul(den, den);
        let den3 = cmul(den2, den);
        let den4 = cmul(den2, den2);
        [
            cscale(cinv(den2), det),
            cscale(cinv(den3), -2.0 * c * det),
            cscale(cinv(den4), 6.0 * c * c * det),
        ]
    }

    /// Jets of the image coordinates (t', z') as functions of (t, z).
    pub fn coordinate_jets(&self, t: f64, z: f64) -> (Jet2, Jet2) {
        let (tp, zp) = self.apply(t, z);
        let [d1, d2, _] = self.cderivs(t, z);
        // Holomorphic: ∂_t φ = φ', ∂_z φ = iφ'; anti-holomorphic (conj):
        // ∂_t φ = φ'(w̄), ∂_z φ = −iφ'(w̄), second derivatives follow suit.
        let s = if self.conj { -1.0 } else { 1.0 };
        let dt_ = d1;
        let dz_ = cscale(cmuli(d1), s);
        let dtt = d2;
        let dtz = cscale(cmuli(d2), s);
        let dzz = cscale(d2, -1.0);
        let tj = Jet2 { val: tp, dt: dt_.0, dz: dz_.0, dtt: dtt.0, dtz: dtz.0, dzz: dzz.0 };
        let zj = Jet2 { val: zp, dt: dt_.1, dz: dz_.1, dtt: dtt.1, dtz: dtz.1, dzz: dzz.1 };
        (tj, zj)
    }

    /// Jets of the four Jacobian entries J = d(t',z')/d(t,z).
    fn jacobian_jets(&self, t: f64, z: f64) -> [[Jet2; 2]; 2] {
        let [d1, d2, d3] = self.cderivs(t, z);
        let s = if self.conj { -1.0 } else { 1.0 };
        let jet_of = |f: (f64, f64), fp: (f64, f64), fpp: (f64, f64)| -> (Jet2, Jet2) {
            let dt_ = fp;
            let dz_ = cscale(cmuli(fp), s);
            let dtt = fpp;
            let dtz = cscale(cmuli(fpp), s);
            let dzz = cscale(fpp, -1.0);
            (
                Jet2 { val: f.0, dt: dt_.0, dz: dz_.0, dtt: dtt.0, dtz: dtz.0, dzz: dzz.0 },
                Jet2 { val: f.1, dt: dt_.1, dz: dz_.1, dtt: dtt.1, dtz: dtz.1, dzz: dzz.1 },
            )
        };
        // Columns of J: ∂_t φ = φ' and ∂_z φ = s·iφ' as complex functions,
        // each with its own complex derivative chain.
        let (re_dt, im_dt) = jet_of(d1, d2, d3);
        let (re_dz, im_dz) = jet_of(cscale(cmuli(d1), s), cscale(cmuli(d2), s), cscale(cmuli(d3), s));
        [[re_dt, re_dz], [im_dt, im_dz]]
    }
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn cinv(a: (f64, f64)) -> (f64, f64) {
    let d = a.0 * a.0 + a.1 * a.1;
    (a.0 / d, -a.1 / d)
}
fn cscale(a: (f64, f64), k: f64) -> (f64, f64) {
    (k * a.0, k * a.1)
}
fn cmuli(a: (f64, f64)) -> (f64, f64) {
    (-a.1, a.0)
}

/// Closed-form catalog entry, optionally Möbius-transformed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CatalogMetric {
    pub n: usize,
    /// g = g̃ without the z⁻² factor when false: the compact background used
    /// by the horizontal-stripe machinery.
    pub conformal_to_boundary: bool,
    pub conformal: Option<ConformalBump>,
    pub transverse: Option<TransverseBump>,
    pub transform: MobiusMap,
}

/// Grid-sampled metric: g̃ components on a grid.
#[derive(Debug, Clone)]
pub struct SampledMetric {
    pub n: usize,
    pub tilde: ReducedSymTensor,
}

#[derive(Debug, Clone)]
pub enum MetricSpec {
    Catalog(CatalogMetric),
    Sampled(SampledMetric),
}

impl MetricSpec {
    pub fn n(&self) -> usize {
        match self {
            MetricSpec::Catalog(c) => c.n,
            MetricSpec::Sampled(s) => s.n,
        }
    }

    pub fn hyperbolic(n: usize) -> MetricSpec {
        MetricSpec::Catalog(CatalogMetric {
            n,
            conformal_to_boundary: true,
            conformal: None,
            transverse: None,
            transform: MobiusMap::IDENTITY,
        })
    }

    /// Flat compact background g = dt² + dz² + |dθ|² (stripe identities in
    /// the g̃ = z²g setting).
    pub fn flat(n: usize) -> MetricSpec {
        MetricSpec::Catalog(CatalogMetric {
            n,
            conformal_to_boundary: false,
            conformal: None,
            transverse: None,
            transform: MobiusMap::IDENTITY,
        })
    }

    pub fn conformal_bump(n: usize, eps: f64, sigma: f64) -> Result<MetricSpec> {
        Self::conformal_bump_with_profile(n, eps, sigma, 0.0, 1.0)
    }

    pub fn conformal_bump_with_profile(
        n: usize,
        eps: f64,
        sigma: f64,
        t_center: f64,
        t_width: f64,
    ) -> Result<MetricSpec> {
        if sigma <= 0.0 {
            return Err(Error::Config(format!("conformal bump needs sigma > 0, got {sigma}")));
        }
        if eps <= -1.0 {
            return Err(Error::Config(format!(
                "conformal bump amplitude eps = {eps} makes the metric indefinite"
            )));
        }
        Ok(MetricSpec::Catalog(CatalogMetric {
            n,
            conformal_to_boundary: true,
            conformal: Some(ConformalBump { eps, sigma, t_center, t_width }),
            transverse: None,
            transform: MobiusMap::IDENTITY,
        }))
    }

    pub fn transverse_bump(n: usize, m: f64, p: f64) -> Result<MetricSpec> {
        if p <= 0.0 {
            return Err(Error::Config(format!("transverse bump needs p > 0, got {p}")));
        }
        if m <= -1.0 {
            return Err(Error::Config(format!("transverse bump m = {m} makes g̃_⊥ non-positive")));
        }
        Ok(MetricSpec::Catalog(CatalogMetric {
            n,
            conformal_to_boundary: true,
            conformal: None,
            transverse: Some(TransverseBump { m, p }),
            transform: MobiusMap::IDENTITY,
        }))
    }

    /// Combined conformal × transverse bump entry.
    pub fn composite_bump(
        n: usize,
        conformal: Option<ConformalBump>,
        transverse: Option<TransverseBump>,
    ) -> MetricSpec {
        MetricSpec::Catalog(CatalogMetric {
            n,
            conformal_to_boundary: true,
            conformal,
            transverse,
            transform: MobiusMap::IDENTITY,
        })
    }
}

/// Jets of the untransformed g̃ components of a catalog entry at (t, z).
fn base_tilde_jets(cat: &CatalogMetric, t: f64, z: f64) -> [Jet2; 4] {
    let one = Jet2::constant(1.0);
    let mut tt = one;
    let mut tz = Jet2::constant(0.0);
    let mut zz = one;
    let mut perp = one;
    if let Some(cb) = cat.conformal {
        let arg = (t - cb.t_center) / cb.t_width;
        let b = (-arg * arg).exp();
        let bj = Jet2 {
            val: b,
            dt: -2.0 * arg / cb.t_width * b,
            dtt: (4.0 * arg * arg - 2.0) / (cb.t_width * cb.t_width) * b,
            ..Default::default()
        };
        let f = Jet2::z_pow(z, cb.sigma).mul(&bj).scale(cb.eps).add(&one);
        tt = f;
        zz = f;
        perp = f;
        tz = Jet2::constant(0.0);
    }
    if let Some(tb) = cat.transverse {
        let f = Jet2::z_pow(z, tb.p).scale(tb.m).add(&one);
        perp = perp.mul(&f);
    }
    [tt, tz, zz, perp]
}

/// Jets of the (possibly transformed) g̃ components of a catalog entry.
///
/// For a Möbius transform φ the pullback is
/// `g̃'_block(w) = λ Jᵀ g̃_block(φw) J`, `g̃'_⊥ = λ |φ'|² g̃_⊥(φw)`
/// with `λ = (z / Im φ)²`; hyperbolic is exactly invariant.
pub fn catalog_tilde_jets(cat: &CatalogMetric, t: f64, z: f64) -> [Jet2; 4] {
    if cat.transform.is_identity() {
        return base_tilde_jets(cat, t, z);
    }
    let (tj, zj) = cat.transform.coordinate_jets(t, z);
    let jac = cat.transform.jacobian_jets(t, z);
    let raw = base_tilde_jets(cat, tj.val, zj.val);
    let base = raw.map(|f| chain2(&f, &tj, &zj));

    let zjet = Jet2::coord_z(z);
    let z2 = zjet.mul(&zjet);
    let zv = zj.val;
    let zp_inv = zj.compose(1.0 / zv, -1.0 / (zv * zv), 2.0 / (zv * zv * zv));
    let lam = z2.mul(&zp_inv).mul(&zp_inv);

    let pick = |a: usize, b: usize| match (a, b) {
        (0, 0) => base[0],
        (1, 1) => base[2],
        _ => base[1],
    };
    let g = |i: usize, j: usize| -> Jet2 {
        let mut acc = Jet2::constant(0.0);
        for a in 0..2 {
            for b in 0..2 {
                acc = acc.add(&jac[a][i].mul(&jac[b][j]).mul(&pick(a, b)));
            }
        }
        acc.mul(&lam)
    };
    let phip2 = jac[0][0].mul(&jac[0][0]).add(&jac[1][0].mul(&jac[1][0]));
    let perp = lam.mul(&phip2).mul(&base[3]);
    [g(0, 0), g(0, 1), g(1, 1), perp]
}

/// Chain rule: jets of F(t'(t,z), z'(t,z)) from jets of F at (t', z').
pub fn chain2(f: &Jet2, tp: &Jet2, zp: &Jet2) -> Jet2 {
    Jet2 {
        val: f.val,
        dt: f.dt * tp.dt + f.dz * zp.dt,
        dz: f.dt * tp.dz + f.dz * zp.dz,
        dtt: f.dt * tp.dtt
            + f.dz * zp.dtt
            + f.dtt * tp.dt * tp.dt
            + 2.0 * f.dtz * tp.dt * zp.dt
            + f.dzz * zp.dt * zp.dt,
        dtz: f.dt * tp.dtz
            + f.dz * zp.dtz
            + f.dtt * tp.dt * tp.dz
            + f.dtz * (tp.dt * zp.dz + tp.dz * zp.dt)
            + f.dzz * zp.dt * zp.dz,
        dzz: f.dt * tp.dzz
            + f.dz * zp.dzz
            + f.dtt * tp.dz * tp.dz
            + 2.0 * f.dtz * tp.dz * zp.dz
            + f.dzz * zp.dz * zp.dz,
    }
}

/// Per-node jets of the physical metric components over a grid.
#[derive(Debug, Clone)]
pub struct MetricJets {
    pub n: usize,
    /// tt, tz, zz, perp jets per node.
    pub comp: [Vec<Jet2>; 4],
}

/// Which differentiation route produced sampled jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// g̃ differentiated (closed form or FD), z⁻² handled analytically.
    Smart,
    /// Physical components sampled and differentiated numerically.
    NaiveFd,
}

/// Jet of z⁻² at height z.
fn conformal_jet(z: f64) -> Jet2 {
    Jet2 { val: 1.0 / (z * z), dz: -2.0 / (z * z * z), dzz: 6.0 / (z * z * z * z), ..Default::default() }
}

pub fn metric_jets(metric: &MetricSpec, grid: &Grid, route: Route) -> MetricJets {
    match (metric, route) {
        (MetricSpec::Catalog(cat), Route::Smart) => {
            let nn = grid.n_nodes();
            let mut comp: [Vec<Jet2>; 4] = [
                vec![Jet2::default(); nn],
                vec![Jet2::default(); nn],
                vec![Jet2::default(); nn],
                vec![Jet2::default(); nn],
            ];
            for k in 0..nn {
                let (t, z) = (grid.t.data[k], grid.z.data[k]);
                let tilde = catalog_tilde_jets(cat, t, z);
                let cf = if cat.conformal_to_boundary { conformal_jet(z) } else { Jet2::constant(1.0) };
                for (c, tj) in tilde.iter().enumerate() {
                    comp[c][k] = cf.mul(tj);
                }
            }
            MetricJets { n: cat.n, comp }
        }
        (MetricSpec::Catalog(cat), Route::NaiveFd) => {
            let mut phys = ReducedSymTensor::zeros(grid.nu, grid.nv);
            for k in 0..grid.n_nodes() {
                let (t, z) = (grid.t.data[k], grid.z.data[k]);
                let tilde = catalog_tilde_jets(cat, t, z);
                let cf = if cat.conformal_to_boundary { 1.0 / (z * z) } else { 1.0 };
                phys.tt.data[k] = cf * tilde[0].val;
                phys.tz.data[k] = cf * tilde[1].val;
                phys.zz.data[k] = cf * tilde[2].val;
                phys.perp.data[k] = cf * tilde[3].val;
            }
            MetricJets { n: cat.n, comp: fd_jets(grid, &phys) }
        }
        (MetricSpec::Sampled(s), Route::Smart) => {
            let tilde_jets = fd_jets(grid, &s.tilde);
            let nn = grid.n_nodes();
            let mut comp = tilde_jets;
            for c in 0..4 {
                for k in 0..nn {
                    comp[c][k] = conformal_jet(grid.z.data[k]).mul(&comp[c][k]);
                }
            }
            MetricJets { n: s.n, comp }
        }
        (MetricSpec::Sampled(s), Route::NaiveFd) => {
            let mut phys = s.tilde.clone();
            for k in 0..grid.n_nodes() {
                let cf = 1.0 / (grid.z.data[k] * grid.z.data[k]);
                phys.tt.data[k] *= cf;
                phys.tz.data[k] *= cf;
                phys.zz.data[k] *= cf;
                phys.perp.data[k] *= cf;
            }
            MetricJets { n: s.n, comp: fd_jets(grid, &phys) }
        }
    }
}

/// FD jets of the four components of a tensor field (physical components).
pub fn fd_jets(grid: &Grid, h: &ReducedSymTensor) -> [Vec<Jet2>; 4] {
    let mk = |f: &Field2| -> Vec<Jet2> {
        let dt = grid.apply(&grid.d_t, f);
        let dz = grid.apply(&grid.d_z, f);
        let dtt = grid.apply(&grid.d_tt, f);
        let dtz = grid.apply(&grid.d_tz, f);
        let dzz = grid.apply(&grid.d_zz, f);
        (0..f.len())
            .map(|k| Jet2 {
                val: f.data[k],
                dt: dt.data[k],
                dz: dz.data[k],
                dtt: dtt.data[k],
                dtz: dtz.data[k],
                dzz: dzz.data[k],
            })
            .collect()
    };
    [mk(&h.tt), mk(&h.tz), mk(&h.zz), mk(&h.perp)]
}

impl MetricJets {
    /// Sum with FD jets of a perturbation tensor (physical components).
    pub fn add_tensor_fd(&self, grid: &Grid, h: &ReducedSymTensor) -> MetricJets {
        let hj = fd_jets(grid, h);
        let comp = [0, 1, 2, 3].map(|c| {
            self.comp[c].iter().zip(&hj[c]).map(|(a, b)| a.add(b)).collect::<Vec<_>>()
        });
        MetricJets { n: self.n, comp }
    }

    /// Jet-level convex combination χ·other + (1−χ)·self with χ jets given.
    pub fn interpolate(&self, other: &MetricJets, chi: &[Jet2]) -> MetricJets {
        let one = Jet2::constant(1.0);
        let comp = [0, 1, 2, 3].map(|c| {
            (0..chi.len())
                .map(|k| {
                    let cj = chi[k];
                    let omc = one.add(&cj.scale(-1.0));
                    cj.mul(&other.comp[c][k]).add(&omc.mul(&self.comp[c][k]))
                })
                .collect::<Vec<_>>()
        });
        MetricJets { n: self.n, comp }
    }
}

/// All pointwise geometric data derived from metric jets at one node.
#[derive(Debug, Clone, Copy)]
pub struct NodeMetric {
    pub gb: Sym2,
    pub gperp: f64,
    pub gib: Sym2,
    pub gperp_inv: f64,
    /// Volume density √(det G)·P^{(n−2)/2} (measure in dt dz).
    pub vol: f64,
    /// Γ^a_bc, a ∈ {t,z}, bc symmetric.
    pub gamma: [Sym2; 2],
    /// Γ^a_⊥⊥.
    pub q: [f64; 2],
    /// Γ^⊥_{a⊥}.
    pub kk: [f64; 2],
    pub ric_b: Sym2,
    pub ric_perp: f64,
    pub scal: f64,
    /// Gaussian curvature of the 2×2 block (horizontal Riemann sector).
    pub k_gauss: f64,
}

/// Geometric data over a grid.
#[derive(Debug, Clone)]
pub struct Geom {
    pub n: usize,
    pub nodes: Vec<NodeMetric>,
}

impl Geom {
    pub fn m(&self) -> f64 {
        (self.n - 2) as f64
    }

    pub fn from_jets(jets: &MetricJets) -> Result<Geom> {
        let nn = jets.comp[0].len();
        let m = (jets.n - 2) as f64;
        let mut nodes = Vec::with_capacity(nn);
        for k in 0..nn {
            let jtt = &jets.comp[0][k];
            let jtz = &jets.comp[1][k];
            let jzz = &jets.comp[2][k];
            let jpp = &jets.comp[3][k];
            let gb = Sym2 { a: jtt.val, b: jtz.val, c: jzz.val };
            let gperp = jpp.val;
            if !gb.is_positive_definite() || gperp <= 0.0 {
                return Err(Error::DegenerateMetric { node: k, what: "metric block not positive definite".into() });
            }
            let gib = gb.inv();

            let dgt = Sym2 { a: jtt.dt, b: jtz.dt, c: jzz.dt };
            let dgz = Sym2 { a: jtt.dz, b: jtz.dz, c: jzz.dz };
            let dg = [dgt, dgz];
            let ddg = [
                [
                    Sym2 { a: jtt.dtt, b: jtz.dtt, c: jzz.dtt },
                    Sym2 { a: jtt.dtz, b: jtz.dtz, c: jzz.dtz },
                ],
                [
                    Sym2 { a: jtt.dtz, b: jtz.dtz, c: jzz.dtz },
                    Sym2 { a: jtt.dzz, b: jtz.dzz, c: jzz.dzz },
                ],
            ];

            let gi = |i: usize, j: usize| gib.get(i, j);
            // Γ^a_bc = ½ G^{ad}(∂_b G_dc + ∂_c G_db − ∂_d G_bc)
            let gamma_l =
                |b: usize, c: usize, d: usize| 0.5 * (dg[b].get(d, c) + dg[c].get(d, b) - dg[d].get(b, c));
            let mut gamma = [Sym2::ZERO; 2];
            for (a, slot) in gamma.iter_mut().enumerate() {
                let mut out = [0.0; 3];
                for (s_idx, (b, c)) in [(0usize, 0usize), (0, 1), (1, 1)].iter().enumerate() {
                    let mut acc = 0.0;
                    for d in 0..2 {
                        acc += gi(a, d) * gamma_l(*b, *c, d);
                    }
                    out[s_idx] = acc;
                }
                *slot = Sym2 { a: out[0], b: out[1], c: out[2] };
            }

            let dgi = |e: usize| -> Sym2 {
                // ∂_e G⁻¹ = −G⁻¹ (∂_e G) G⁻¹
                let d = dg[e];
                let m00 = gib.a * d.a + gib.b * d.b;
                let m01 = gib.a * d.b + gib.b * d.c;
                let m10 = gib.b * d.a + gib.c * d.b;
                let m11 = gib.b * d.b + gib.c * d.c;
                Sym2 {
                    a: -(m00 * gib.a + m01 * gib.b),
                    b: -(m00 * gib.b + m01 * gib.c),
                    c: -(m10 * gib.b + m11 * gib.c),
                }
            };
            let dgamma_l = |e: usize, b: usize, c: usize, d: usize| {
                0.5 * (ddg[b][e].get(d, c) + ddg[c][e].get(d, b) - ddg[d][e].get(b, c))
            };
            let dgamma = |e: usize, a: usize, b: usize, c: usize| -> f64 {
                let gie = dgi(e);
                let mut acc = 0.0;
                for d in 0..2 {
                    acc += gie.get(a, d) * gamma_l(b, c, d) + gi(a, d) * dgamma_l(e, b, c, d);
                }
                acc
            };

            let gam = |a: usize, b: usize, c: usize| gamma[a].get(b, c);
            let mut r2 = [0.0; 3];
            for (s_idx, (a, b)) in [(0usize, 0usize), (0, 1), (1, 1)].iter().enumerate() {
                let (a, b) = (*a, *b);
                let mut val = 0.0;
                for c in 0..2 {
                    val += dgamma(c, c, a, b) - dgamma(a, c, c, b);
                    for d in 0..2 {
                        val += gam(c, c, d) * gam(d, a, b) - gam(c, a, d) * gam(d, c, b);
                    }
                }
                r2[s_idx] = val;
            }
            let r2 = Sym2 { a: r2[0], b: r2[1], c: r2[2] };

            // Warped corrections with fiber radius f = √P.
            let p = gperp;
            let dp = [jpp.dt, jpp.dz];
            let ddp = [[jpp.dtt, jpp.dtz], [jpp.dtz, jpp.dzz]];
            let sq = p.sqrt();
            let df = [dp[0] / (2.0 * sq), dp[1] / (2.0 * sq)];
            let ddf = |a: usize, b: usize| ddp[a][b] / (2.0 * sq) - dp[a] * dp[b] / (4.0 * p * sq);
            let hessf = |a: usize, b: usize| ddf(a, b) - gam(0, a, b) * df[0] - gam(1, a, b) * df[1];
            let lapf = gi(0, 0) * hessf(0, 0) + 2.0 * gi(0, 1) * hessf(0, 1) + gi(1, 1) * hessf(1, 1);
            let gradf2 = gi(0, 0) * df[0] * df[0] + 2.0 * gi(0, 1) * df[0] * df[1] + gi(1, 1) * df[1] * df[1];

            let ric_b = Sym2 {
                a: r2.a - m * hessf(0, 0) / sq,
                b: r2.b - m * hessf(0, 1) / sq,
                c: r2.c - m * hessf(1, 1) / sq,
            };
            let ric_perp = -(sq * lapf + (m - 1.0) * gradf2);
            let scal = gib.a * ric_b.a + 2.0 * gib.b * ric_b.b + gib.c * ric_b.c + m * ric_perp / p;

            let q = [
                -0.5 * (gi(0, 0) * dp[0] + gi(0, 1) * dp[1]),
                -0.5 * (gi(1, 0) * dp[0] + gi(1, 1) * dp[1]),
            ];
            let kk = [dp[0] / (2.0 * p), dp[1] / (2.0 * p)];
            let k_gauss = 0.5 * (gib.a * r2.a + 2.0 * gib.b * r2.b + gib.c * r2.c);

            nodes.push(NodeMetric {
                gb,
                gperp,
                gib,
                gperp_inv: 1.0 / gperp,
                vol: gb.det().sqrt() * p.powf(m / 2.0),
                gamma,
                q,
                kk,
                ric_b,
                ric_perp,
                scal,
                k_gauss,
            });
        }
        Ok(Geom { n: jets.n, nodes })
    }
}

/// Build geometric data for a metric on a grid via the chosen route.
pub fn geom_on_grid(metric: &MetricSpec, grid: &Grid, route: Route) -> Result<Geom> {
    Geom::from_jets(&metric_jets(metric, grid, route))
}

/// Sample the g̃ components of any metric on a grid.
pub fn sample_tilde(metric: &MetricSpec, grid: &Grid) -> ReducedSymTensor {
    match metric {
        MetricSpec::Sampled(s) => s.tilde.clone(),
        MetricSpec::Catalog(cat) => {
            let mut out = ReducedSymTensor::zeros(grid.nu, grid.nv);
            for k in 0..grid.n_nodes() {
                let jets = catalog_tilde_jets(cat, grid.t.data[k], grid.z.data[k]);
                out.tt.data[k] = jets[0].val;
                out.tz.data[k] = jets[1].val;
                out.zz.data[k] = jets[2].val;
                out.perp.data[k] = jets[3].val;
            }
            out
        }
    }
}

/// Pull back a metric by the scaling (t,z) ↦ (λt, λz), realized on the fixed
/// chart: g̃_λ(t,z) = g̃(λt, λz). Closed form for catalog entries.
pub fn scaling_pullback(metric: &MetricSpec, lambda: f64) -> Result<MetricSpec> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Config(format!("scaling parameter λ = {lambda} must lie in (0, 1]")));
    }
    match metric {
        MetricSpec::Catalog(cat) => {
            if cat.transform.is_identity() {
                let conformal = cat.conformal.map(|cb| ConformalBump {
                    eps: cb.eps * lambda.powf(cb.sigma),
                    sigma: cb.sigma,
                    t_center: cb.t_center / lambda,
                    t_width: cb.t_width / lambda,
                });
                let transverse = cat.transverse.map(|tb| TransverseBump { m: tb.m * lambda.powf(tb.p), p: tb.p });
                Ok(MetricSpec::Catalog(CatalogMetric { conformal, transverse, ..cat.clone() }))
            } else {
                Ok(MetricSpec::Catalog(CatalogMetric {
                    transform: cat.transform.compose(&MobiusMap::scaling(lambda)),
                    ..cat.clone()
                }))
            }
        }
        MetricSpec::Sampled(_) => Err(Error::Unsupported(
            "scaling pullback of a sampled metric leaves its chart; use resample_mobius".into(),
        )),
    }
}

/// Pull back a catalog metric by the hyperbolic inversion about (t0, 0),
/// composed with a post-scaling.
pub fn hyperbolic_inversion(metric: &MetricSpec, center_t: f64, post_scale: f64) -> Result<MetricSpec> {
    match metric {
        MetricSpec::Catalog(cat) => {
            let map = MobiusMap::scaling(post_scale).compose(&MobiusMap::inversion(center_t));
            Ok(MetricSpec::Catalog(CatalogMetric { transform: cat.transform.compose(&map), ..cat.clone() }))
        }
        MetricSpec::Sampled(_) => Err(Error::Unsupported(
            "inversion of sampled metrics goes through resample_mobius".into(),
        )),
    }
}

/// Resample a sampled metric through a Möbius map onto a destination grid
/// with local cubic interpolation; exact where the source is constant.
pub fn resample_mobius(
    src: &SampledMetric,
    src_grid: &Grid,
    map: &MobiusMap,
    dst_grid: &Grid,
) -> Result<SampledMetric> {
    let interp = calculus::CubicInterp::new(src_grid)?;
    let mut out = ReducedSymTensor::zeros(dst_grid.nu, dst_grid.nv);
    for k in 0..dst_grid.n_nodes() {
        let (t, z) = (dst_grid.t.data[k], dst_grid.z.data[k]);
        let (tp, zp) = map.apply(t, z);
        let jac = map.jacobian_jets(t, z);
        let j = [[jac[0][0].val, jac[0][1].val], [jac[1][0].val, jac[1][1].val]];
        let lam = (z / zp) * (z / zp);
        let phip2 = j[0][0] * j[0][0] + j[1][0] * j[1][0];
        let g_src = [
            interp.eval(&src.tilde.tt, tp, zp)?,
            interp.eval(&src.tilde.tz, tp, zp)?,
            interp.eval(&src.tilde.zz, tp, zp)?,
            interp.eval(&src.tilde.perp, tp, zp)?,
        ];
        let gs = |a: usize, b: usize| match (a, b) {
            (0, 0) => g_src[0],
            (1, 1) => g_src[2],
            _ => g_src[1],
        };
        let mut blk = [0.0; 3];
        for (s_idx, (i, jj)) in [(0usize, 0usize), (0, 1), (1, 1)].iter().enumerate() {
            let mut acc = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    acc += j[a][*i] * j[b][*jj] * gs(a, b);
                }
            }
            blk[s_idx] = lam * acc;
        }
        out.tt.data[k] = blk[0];
        out.tz.data[k] = blk[1];
        out.zz.data[k] = blk[2];
        out.perp.data[k] = lam * phip2 * g_src[3];
    }
    Ok(SampledMetric { n: src.n, tilde: out })
}

/// Fitted coefficient of zⁿ in tr(g̃ − I) near the conformal boundary:
/// the repo's mass proxy.
pub fn mass_aspect(metric: &MetricSpec, grid: &Grid, residual_threshold: f64) -> Result<f64> {
    let n = metric.n();
    let m = (n - 2) as f64;
    let tilde = sample_tilde(metric, grid);
    let band_z = 3.0 * grid.z_min;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut pts = Vec::new();
    for k in 0..grid.n_nodes() {
        let z = grid.z.data[k];
        if z <= band_z {
            let tr = (tilde.tt.data[k] - 1.0) + (tilde.zz.data[k] - 1.0) + m * (tilde.perp.data[k] - 1.0);
            let zn = z.powi(n as i32);
            num += tr * zn;
            den += zn * zn;
            pts.push((tr, zn));
        }
    }
    if pts.len() < 6 {
        return Err(Error::InsufficientData(format!(
            "only {} nodes below the mass-fit band z ≤ {band_z}",
            pts.len()
        )));
    }
    let c = if den > 0.0 { num / den } else { 0.0 };
    let ss_tot: f64 = pts.iter().map(|(tr, _)| tr * tr).sum();
    let ss_res: f64 = pts.iter().map(|(tr, zn)| (tr - c * zn) * (tr - c * zn)).sum();
    if ss_tot < 1e-28 {
        return Ok(0.0);
    }
    let rel = (ss_res / ss_tot).sqrt();
    if rel > residual_threshold {
        return Err(Error::NoWellDefinedMass { residual: rel, threshold: residual_threshold });
    }
    Ok(c)
}

/// The reduced-representable Killing one-forms of the hyperbolic model:
/// ∂_t, the dilation and the inversion-generated field (with their
/// transverse moments).
pub fn hyperbolic_killing_fields(grid: &Grid) -> Vec<ReducedVector> {
    let nn = grid.n_nodes();
    let f = |g: &dyn Fn(f64, f64) -> f64| -> Field2 {
        Field2 {
            nu: grid.nu,
            nv: grid.nv,
            data: (0..nn).map(|k| g(grid.t.data[k], grid.z.data[k])).collect(),
        }
    };
    let translation = ReducedVector { t: f(&|_, z| 1.0 / (z * z)), z: f(&|_, _| 0.0), perp_moment: None };
    let dilation = ReducedVector {
        t: f(&|t, z| t / (z * z)),
        z: f(&|_, z| 1.0 / z),
        perp_moment: Some(f(&|_, z| 1.0 / (z * z))),
    };
    // X = (t² − z² − |θ|²)∂_t + 2tz ∂_z + 2tθ^A ∂_A restricted to the slice.
    let inversion_gen = ReducedVector {
        t: f(&|t, z| (t * t - z * z) / (z * z)),
        z: f(&|t, z| 2.0 * t / z),
        perp_moment: Some(f(&|t, z| 2.0 * t / (z * z))),
    };
    vec![translation, dilation, inversion_gen]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ChartSpec;
    use crate::grid::Grading;

    fn test_grid() -> Grid {
        let chart = ChartSpec::annulus(3).unwrap();
        Grid::annulus(&chart, 24, 28, 0.15, Grading::Uniform).unwrap()
    }

    #[test]
    fn hyperbolic_christoffels_and_curvature() {
        let grid = test_grid();
        let geom = geom_on_grid(&MetricSpec::hyperbolic(3), &grid, Route::Smart).unwrap();
        for (k, nm) in geom.nodes.iter().enumerate() {
            let z = grid.z.data[k];
            // Γ^z_zz = −1/z, Γ^t_tz = −1/z, Γ^z_tt = 1/z, q^z = Γ^z_⊥⊥ = 1/z.
            assert!((nm.gamma[1].c + 1.0 / z).abs() < 1e-10 / z);
            assert!((nm.gamma[0].b + 1.0 / z).abs() < 1e-10 / z);
            assert!((nm.gamma[1].a - 1.0 / z).abs() < 1e-10 / z);
            assert!((nm.q[1] - 1.0 / z).abs() < 1e-10 / z);
            assert!((nm.scal + 6.0).abs() < 1e-9, "R = {}", nm.scal);
            assert!((nm.ric_b.a + 2.0 * nm.gb.a).abs() < 1e-9 / (z * z));
            assert!((nm.ric_perp + 2.0 * nm.gperp).abs() < 1e-9 / (z * z));
            assert!((nm.k_gauss + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hyperbolic_n4_einstein_constant() {
        let grid = Grid::annulus(&ChartSpec::annulus(4).unwrap(), 20, 20, 0.2, Grading::Uniform).unwrap();
        let geom = geom_on_grid(&MetricSpec::hyperbolic(4), &grid, Route::Smart).unwrap();
        for nm in &geom.nodes {
            assert!((nm.scal + 12.0).abs() < 1e-9);
            assert!((nm.ric_b.a + 3.0 * nm.gb.a).abs() < 1e-8 * nm.gb.a.abs());
        }
    }

    #[test]
    fn transverse_bump_value() {
        let m = MetricSpec::transverse_bump(3, 0.1, 3.0).unwrap();
        let grid = test_grid();
        let tilde = sample_tilde(&m, &grid);
        for k in 0..grid.n_nodes() {
            let z = grid.z.data[k];
            assert!((tilde.perp.data[k] - (1.0 + 0.1 * z.powi(3))).abs() < 1e-14);
            assert!((tilde.tt.data[k] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn conformal_bump_zero_eps_is_hyperbolic() {
        let m = MetricSpec::conformal_bump(3, 0.0, 3.0).unwrap();
        let grid = test_grid();
        let tilde = sample_tilde(&m, &grid);
        assert!(tilde.sub(&sample_tilde(&MetricSpec::hyperbolic(3), &grid)).max_abs() < 1e-15);
        assert!(MetricSpec::conformal_bump(3, 1e-3, -1.0).is_err());
    }

    fn interior_scal_gap(grid: &Grid, a: &Geom, b: &Geom) -> f64 {
        let mut worst = 0.0_f64;
        for iu in 2..grid.nu - 2 {
            for iv in 2..grid.nv - 2 {
                let k = grid.node(iu, iv);
                worst = worst.max((a.nodes[k].scal - b.nodes[k].scal).abs());
            }
        }
        worst
    }

    #[test]
    fn bump_curvature_matches_naive_fd_route() {
        let m = MetricSpec::conformal_bump(3, 1e-2, 3.0).unwrap();
        let chart = ChartSpec::annulus(3).unwrap();
        let mut errs = Vec::new();
        for nn in [32, 64, 128] {
            let grid = Grid::annulus(&chart, nn, nn, 0.5, Grading::Uniform).unwrap();
            let smart = geom_on_grid(&m, &grid, Route::Smart).unwrap();
            let naive = geom_on_grid(&m, &grid, Route::NaiveFd).unwrap();
            errs.push(interior_scal_gap(&grid, &smart, &naive));
        }
        assert!(crate::field::observed_order(&errs) > 1.7, "{errs:?}");
    }

    #[test]
    fn scaling_pullback_laws() {
        let m = MetricSpec::conformal_bump(3, 1e-3, 3.0).unwrap();
        let p1 = scaling_pullback(&m, 0.5).unwrap();
        let p2 = scaling_pullback(&p1, 0.5).unwrap();
        let q = scaling_pullback(&m, 0.25).unwrap();
        let (MetricSpec::Catalog(a), MetricSpec::Catalog(b)) = (&p2, &q) else { panic!() };
        assert!((a.conformal.unwrap().eps - b.conformal.unwrap().eps).abs() < 1e-18);
        let hyp = MetricSpec::hyperbolic(3);
        let hp = scaling_pullback(&hyp, 0.3).unwrap();
        let grid = test_grid();
        assert!(sample_tilde(&hp, &grid).sub(&sample_tilde(&hyp, &grid)).max_abs() < 1e-15);
        assert!(scaling_pullback(&m, 0.0).is_err());
    }

    #[test]
    fn inversion_fixes_hyperbolic_and_is_involutive() {
        let grid = test_grid();
        let hyp = MetricSpec::hyperbolic(3);
        let inv = hyperbolic_inversion(&hyp, 0.0, 1.0).unwrap();
        let d = sample_tilde(&inv, &grid).sub(&sample_tilde(&hyp, &grid)).max_abs();
        assert!(d < 1e-12, "{d}");

        let m = MetricSpec::conformal_bump(3, 1e-2, 3.0).unwrap();
        let once = hyperbolic_inversion(&m, 0.0, 1.0).unwrap();
        let twice = hyperbolic_inversion(&once, 0.0, 1.0).unwrap();
        let d2 = sample_tilde(&twice, &grid).sub(&sample_tilde(&m, &grid)).max_abs();
        assert!(d2 < 1e-12, "{d2}");
    }

    #[test]
    fn transformed_bump_curvature_is_consistent() {
        // Transformed-jet pullback against the naive FD route; also pins the
        // closed-form pullback jets (smart route is FD-free for catalogs, so
        // agreement at order 2 validates the Möbius jet algebra).
        let m = MetricSpec::conformal_bump(3, 1e-2, 3.0).unwrap();
        let inv = hyperbolic_inversion(&m, -5.0, 1.0).unwrap();
        let chart = ChartSpec::annulus(3).unwrap();
        let mut errs = Vec::new();
        for nn in [32, 64, 128] {
            let grid = Grid::annulus(&chart, nn, nn, 0.5, Grading::Uniform).unwrap();
            let smart = geom_on_grid(&inv, &grid, Route::Smart).unwrap();
            let naive = geom_on_grid(&inv, &grid, Route::NaiveFd).unwrap();
            errs.push(interior_scal_gap(&grid, &smart, &naive));
        }
        assert!(crate::field::observed_order(&errs) > 1.7, "{errs:?}");
    }

    #[test]
    fn mass_aspect_values() {
        let chart = ChartSpec::annulus(3).unwrap();
        let grid = Grid::annulus(&chart, 48, 64, 0.05, Grading::BothEnds { strength: 2.0 }).unwrap();
        assert_eq!(mass_aspect(&MetricSpec::hyperbolic(3), &grid, 0.25).unwrap(), 0.0);
        let tb = MetricSpec::transverse_bump(3, 0.05, 3.0).unwrap();
        let c = mass_aspect(&tb, &grid, 0.25).unwrap();
        assert!((c - 0.05).abs() < 1e-10, "{c}");
    }
}
