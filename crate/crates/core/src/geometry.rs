//! Poincaré-ball primitives (curvature −1) and entailment-cone geometry.
//!
//! All operations are pure functions of their inputs and safe for
//! unrestricted parallel use. Points live in the open unit ball; every
//! operation that can drift outward projects its result back to norm
//! `1 − ball_eps`. Trainable parameters elsewhere in the crate are tangent
//! vectors at the origin and only become [`BallPoint`]s through
//! [`PoincareBall::exp_map_origin`].
//!
//! The exponential map follows the convention in which the tangent norm is
//! scaled by `1 / (1 − ‖z‖²)` — half the usual conformal factor
//! `λ_z = 2 / (1 − ‖z‖²)`. The logarithmic map here is its exact inverse
//! under the same convention, so round trips hold regardless.

use crate::error::{Error, Result};

/// Guard added to Möbius-addition denominators, which can underflow for
/// near-antipodal inputs.
const MOBIUS_DENOM_GUARD: f64 = 1e-15;

/// Arguments this close to ±1 are snapped to the boundary before `acos`,
/// so exactly collinear configurations return exactly 0 or π.
const ACOS_SNAP_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GeometryConfig {
    /// Embedding dimension.
    pub dim: usize,
    /// Projection margin: points are kept at norm ≤ 1 − ball_eps.
    pub ball_eps: f64,
    /// Cone-width constant K in ψ(x) = arcsin(K (1 − ‖x‖²) / ‖x‖).
    pub cone_k: f64,
    /// Minimum norm at which a cone aperture is defined. With K = 0.1 the
    /// arcsin argument reaches 1 at ‖x‖ ≈ 0.0990, so 0.1 keeps the aperture
    /// well-defined; callers lift shorter vectors radially up to this norm.
    pub min_cone_norm: f64,
    /// Clamp margin for arcsin arguments.
    pub arg_clamp_eps: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            dim: 64,
            ball_eps: 1e-5,
            cone_k: 0.1,
            min_cone_norm: 0.1,
            arg_clamp_eps: 1e-7,
        }
    }
}

impl GeometryConfig {
    pub fn with_dim(dim: usize) -> Self {
        GeometryConfig {
            dim,
            ..Default::default()
        }
    }
}

/// A point of the open unit ball. Construction validates the invariants
/// (finite coordinates, squared norm < 1).
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::contract("ball point has non-finite coordinates"));
        }
        let nsq: f64 = coords.iter().map(|c| c * c).sum();
        if nsq >= 1.0 {
            return Err(Error::contract(format!(
                "ball point norm {} is outside the open unit ball",
                nsq.sqrt()
            )));
        }
        Ok(BallPoint { coords })
    }

    pub fn origin(dim: usize) -> Self {
        BallPoint {
            coords: vec![0.0; dim],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    /// The gyro-inverse −x.
    pub fn neg(&self) -> BallPoint {
        BallPoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// A Euclidean vector in the tangent space at `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    coords: Vec<f64>,
    base: BallPoint,
}

impl TangentVector {
    pub fn new(coords: Vec<f64>, base: BallPoint) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::contract("tangent vector has non-finite coordinates"));
        }
        if coords.len() != base.dim() {
            return Err(Error::contract(format!(
                "tangent vector dimension {} does not match base dimension {}",
                coords.len(),
                base.dim()
            )));
        }
        Ok(TangentVector { coords, base })
    }

    pub fn at_origin(coords: Vec<f64>) -> Result<Self> {
        let dim = coords.len();
        TangentVector::new(coords, BallPoint::origin(dim))
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn base(&self) -> &BallPoint {
        &self.base
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The Poincaré ball with curvature −1 and the numeric guards from
/// [`GeometryConfig`].
#[derive(Debug, Clone, Default)]
pub struct PoincareBall {
    cfg: GeometryConfig,
}

impl PoincareBall {
    pub fn new(cfg: GeometryConfig) -> Self {
        PoincareBall { cfg }
    }

    pub fn config(&self) -> &GeometryConfig {
        &self.cfg
    }

    fn check_dims(&self, a: &[f64], b: &[f64]) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::contract(format!(
                "dimension mismatch: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        Ok(())
    }

    /// Möbius addition x ⊕ y.
    ///
    /// Reduces to Euclidean addition as x, y → 0; the result is projected
    /// back into the ball if floating error pushes it outward.
    pub fn mobius_add(&self, x: &BallPoint, y: &BallPoint) -> Result<BallPoint> {
        self.check_dims(x.coords(), y.coords())?;
        let coords = mobius_add_raw(x.coords(), y.coords());
        self.project_to_ball(&coords)
    }

    /// Exponential map at `z`. The zero tangent vector returns `z` exactly.
    pub fn exp_map(&self, z: &BallPoint, v: &TangentVector) -> Result<BallPoint> {
        if v.base() != z {
            return Err(Error::contract(
                "tangent vector is not based at the map's base point",
            ));
        }
        self.check_dims(z.coords(), v.coords())?;
        let vnorm = v.norm();
        if vnorm == 0.0 {
            return Ok(z.clone());
        }
        let scale = (vnorm / (1.0 - z.norm_sq())).tanh() / vnorm;
        let step: Vec<f64> = v.coords().iter().map(|c| c * scale).collect();
        let step = BallPoint::new(step)?;
        self.mobius_add(z, &step)
    }

    /// Logarithmic map at `z`; the inverse of [`Self::exp_map`].
    /// `log_map(z, z)` is the zero vector.
    pub fn log_map(&self, z: &BallPoint, y: &BallPoint) -> Result<TangentVector> {
        self.check_dims(z.coords(), y.coords())?;
        if z == y {
            return TangentVector::new(vec![0.0; z.dim()], z.clone());
        }
        let w = self.mobius_add(&z.neg(), y)?;
        let wnorm = w.norm();
        if wnorm == 0.0 {
            return TangentVector::new(vec![0.0; z.dim()], z.clone());
        }
        let scale = (1.0 - z.norm_sq()) * wnorm.atanh() / wnorm;
        TangentVector::new(w.coords().iter().map(|c| c * scale).collect(), z.clone())
    }

    /// Exponential map at the origin: `tanh(‖v‖) · v / ‖v‖`.
    pub fn exp_map_origin(&self, v: &[f64]) -> Result<BallPoint> {
        let tv = TangentVector::at_origin(v.to_vec())?;
        self.exp_map(&BallPoint::origin(v.len()), &tv)
    }

    /// Logarithmic map at the origin: `artanh(‖y‖) · y / ‖y‖`.
    pub fn log_map_origin(&self, y: &BallPoint) -> Vec<f64> {
        let tv = self
            .log_map(&BallPoint::origin(y.dim()), y)
            .expect("origin log map cannot fail on a valid ball point");
        tv.coords().to_vec()
    }

    /// Rescales `x` to norm exactly `1 − ball_eps` when it lies outside
    /// that radius; vectors already inside are returned unchanged.
    pub fn project_to_ball(&self, x: &[f64]) -> Result<BallPoint> {
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::contract("cannot project a non-finite vector"));
        }
        let max_norm = 1.0 - self.cfg.ball_eps;
        let nsq: f64 = x.iter().map(|c| c * c).sum();
        if nsq <= max_norm * max_norm {
            return Ok(BallPoint { coords: x.to_vec() });
        }
        let scale = max_norm / nsq.sqrt();
        Ok(BallPoint {
            coords: x.iter().map(|c| c * scale).collect(),
        })
    }

    /// Half-aperture ψ(x) = arcsin(K (1 − ‖x‖²) / ‖x‖) of the entailment
    /// cone at apex `x`. Undefined too close to the origin; callers lift
    /// norms up to `min_cone_norm` first.
    pub fn half_aperture(&self, x: &BallPoint) -> Result<f64> {
        let norm = x.norm();
        if norm < self.cfg.min_cone_norm - 1e-9 {
            return Err(Error::contract(format!(
                "cone aperture undefined at norm {norm} < {}",
                self.cfg.min_cone_norm
            )));
        }
        let arg = self.cfg.cone_k * (1.0 - norm * norm) / norm;
        let hi = 1.0 - self.cfg.arg_clamp_eps;
        Ok(arg.clamp(-hi, hi).asin())
    }

    /// Angle at `x` between the ray from the origin through `x` and the
    /// ray from `x` through `y`, in [0, π]. Collinear configurations return
    /// exactly 0 (y outward of x) or π (y between the origin and x).
    pub fn cone_angle(&self, x: &BallPoint, y: &BallPoint) -> Result<f64> {
        self.check_dims(x.coords(), y.coords())?;
        if x.is_origin() {
            return Err(Error::contract("cone angle undefined at the origin"));
        }
        if x == y {
            return Err(Error::contract("cone angle undefined for y = x"));
        }
        let xx = x.norm_sq();
        let yy = y.norm_sq();
        let xy = dot(x.coords(), y.coords());
        let diff_norm = x
            .coords()
            .iter()
            .zip(y.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let num = xy * (1.0 + xx) - xx * (1.0 + yy);
        let den = xx.sqrt() * diff_norm * (1.0 + xx * yy - 2.0 * xy).max(0.0).sqrt();
        let arg = num / (den + MOBIUS_DENOM_GUARD);
        Ok(acos_clamped(arg))
    }

    /// Poincaré distance from the origin: 2 · artanh(‖x‖).
    pub fn dist_to_origin(&self, x: &BallPoint) -> f64 {
        2.0 * x.norm().atanh()
    }
}

/// Möbius addition on raw coordinate slices, with the guarded denominator.
/// Used by [`PoincareBall::mobius_add`]; exposed for oracle-style
/// compositions in tests.
pub fn mobius_add_raw(x: &[f64], y: &[f64]) -> Vec<f64> {
    let xx = dot(x, x);
    let yy = dot(y, y);
    let xy = dot(x, y);
    let cx = 1.0 + 2.0 * xy + yy;
    let cy = 1.0 - xx;
    let den = 1.0 + 2.0 * xy + xx * yy + MOBIUS_DENOM_GUARD;
    x.iter()
        .zip(y)
        .map(|(a, b)| (cx * a + cy * b) / den)
        .collect()
}

/// `acos` with the argument clamped to [−1, 1]; values within
/// [`ACOS_SNAP_EPS`] of the boundary are snapped onto it first.
pub fn acos_clamped(arg: f64) -> f64 {
    if arg >= 1.0 - ACOS_SNAP_EPS {
        0.0
    } else if arg <= -1.0 + ACOS_SNAP_EPS {
        std::f64::consts::PI
    } else {
        arg.acos()
    }
}
