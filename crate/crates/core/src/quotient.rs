//! The model of the real locus as `SO(3)/Z2 = S^3/Z4` and its projection to RP^2.

use alloc::vec::Vec;

use nalgebra::{Matrix3, Quaternion, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::grassmann::quadric_residual;
use crate::reallocus::{base_projection, cross, RealLocusPoint};

const ROTATION_TOL: f64 = 1e-10;
const ORTHOGONAL_TOL: f64 = 1e-10;

/// A 3x3 matrix with orthonormal columns and determinant +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Rotation {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let gram = m.transpose() * m - Matrix3::identity();
        if !(gram.amax() <= ROTATION_TOL && (m.determinant() - 1.0).abs() <= ROTATION_TOL) {
            return Err(Error::NotRotation);
        }
        Ok(Rotation(m))
    }

    pub fn identity() -> Self {
        Rotation(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn column(&self, j: usize) -> [f64; 3] {
        [self.0[(0, j)], self.0[(1, j)], self.0[(2, j)]]
    }

    /// `R sigma`: the first two columns negated.
    pub fn times_sigma(&self) -> Self {
        Rotation(self.0 * sigma())
    }

    pub fn max_abs_diff(&self, other: &Rotation) -> f64 {
        (self.0 - other.0).amax()
    }
}

/// `diag(-1, -1, 1)`, the rotation by pi about the third axis.
pub fn sigma() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0))
}

/// A unit quaternion `w + x i + y j + z k`, acting on vectors by `v -> q v q*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion(Quaternion<f64>);

impl UnitQuaternion {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let q = Quaternion::new(w, x, y, z);
        if !((q.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidArgument("quaternion is not unit"));
        }
        Ok(UnitQuaternion(q))
    }

    pub fn one() -> Self {
        UnitQuaternion(Quaternion::new(1.0, 0.0, 0.0, 0.0))
    }

    pub fn k() -> Self {
        UnitQuaternion(Quaternion::new(0.0, 0.0, 0.0, 1.0))
    }

    /// `(w, x, y, z)`.
    pub fn components(&self) -> [f64; 4] {
        [self.0.w, self.0.i, self.0.j, self.0.k]
    }

    /// Hamilton product `self * rhs`.
    pub fn mul(&self, rhs: &UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * rhs.0)
    }

    pub fn neg(&self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }

    pub fn distance(&self, other: &UnitQuaternion) -> f64 {
        (self.0 - other.0).norm()
    }

    pub fn rotation(&self) -> Rotation {
        let r = nalgebra::UnitQuaternion::new_unchecked(self.0).to_rotation_matrix();
        Rotation(r.into_inner())
    }
}

/// `(u, v) = ((eta0, eta1, eta2), (eta5, -eta4, eta3))`, so that `u . v` is the quadric.
pub fn uv_split(eta: &[f64; 6]) -> Result<([f64; 3], [f64; 3])> {
    let u = [eta[0], eta[1], eta[2]];
    let v = [eta[5], -eta[4], eta[3]];
    let nu = libm::sqrt(u.iter().map(|x| x * x).sum());
    let nv = libm::sqrt(v.iter().map(|x| x * x).sum());
    if !(nu > 0.0 && nv > 0.0) {
        return Err(Error::ZeroVector);
    }
    let dot = quadric_residual(eta);
    if !(dot.abs() <= ORTHOGONAL_TOL * nu * nv) {
        return Err(Error::NotOrthogonal(dot));
    }
    Ok((u, v))
}

/// Columns `(u/|u|, v/|v|, u/|u| x v/|v|)`.
pub fn so3_matrix(u: &[f64; 3], v: &[f64; 3]) -> Result<Rotation> {
    let nu = libm::sqrt(u.iter().map(|x| x * x).sum());
    let nv = libm::sqrt(v.iter().map(|x| x * x).sum());
    if !(nu > 0.0 && nv > 0.0) {
        return Err(Error::ZeroVector);
    }
    let a = u.map(|x| x / nu);
    let b = v.map(|x| x / nv);
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    if !(dot.abs() <= ORTHOGONAL_TOL) {
        return Err(Error::NotOrthogonal(dot));
    }
    let c = cross(&a, &b);
    Rotation::new(Matrix3::from_columns(&[
        Vector3::from(a),
        Vector3::from(b),
        Vector3::from(c),
    ]))
}

/// The two unit quaternions `+-q` covering `r`.
pub fn quaternion_lift(r: &Rotation) -> Result<[UnitQuaternion; 2]> {
    let r = Rotation::new(r.0)?;
    let q = nalgebra::UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(r.0));
    let mut q = q.into_inner();
    // Fix the representative: first nonzero component positive.
    let lead = [q.w, q.i, q.j, q.k]
        .into_iter()
        .find(|x| x.abs() > 1e-12)
        .unwrap_or(1.0);
    if lead < 0.0 {
        q = -q;
    }
    let q = UnitQuaternion(q);
    Ok([q, q.neg()])
}

/// Rotation of a locus point, built from its Pluecker coordinates.
pub fn locus_rotation(p: &RealLocusPoint) -> Result<Rotation> {
    let (u, v) = uv_split(p.eta())?;
    so3_matrix(&u, &v)
}

/// `{q, -q, q k, -q k}` for a lift `q` of the rotation of `p`.
pub fn z4_coset(p: &RealLocusPoint) -> Result<[UnitQuaternion; 4]> {
    coset_of(&locus_rotation(p)?)
}

/// The lifts of `r` and of `r sigma`; `k` covers `sigma`.
pub fn coset_of(r: &Rotation) -> Result<[UnitQuaternion; 4]> {
    let [q, mq] = quaternion_lift(r)?;
    let [s, ms] = quaternion_lift(&r.times_sigma())?;
    Ok([q, mq, s, ms])
}

/// Hausdorff distance between two finite quaternion sets.
pub fn set_distance(a: &[UnitQuaternion], b: &[UnitQuaternion]) -> f64 {
    let one_way = |x: &[UnitQuaternion], y: &[UnitQuaternion]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.distance(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// How far `set * k` is from `set`.
pub fn k_closure_residual(set: &[UnitQuaternion]) -> f64 {
    let k = UnitQuaternion::k();
    let moved: Vec<UnitQuaternion> = set.iter().map(|q| q.mul(&k)).collect();
    set_distance(set, &moved)
}

/// Angle between two lines through the origin.
pub fn line_angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let c = cross(a, b);
    let s = libm::sqrt(c.iter().map(|x| x * x).sum());
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    libm::atan2(s, d.abs())
}

/// Largest angle between the RP^2 classes read off the rotation and the
/// ones read off the frame: the second column against `[u0 x u0']`, the
/// first against `[alpha' u0 - alpha u0']`.
pub fn bundle_projection_consistency(p: &RealLocusPoint) -> Result<f64> {
    let r = locus_rotation(p)?;
    let base = base_projection(p)?;
    let (u, up) = (p.frame().u(), p.frame().u_prime());
    let diff: [f64; 3] = core::array::from_fn(|i| up[0] * u[i + 1] - u[0] * up[i + 1]);
    Ok(line_angle(&r.column(1), &base).max(line_angle(&r.column(0), &diff)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::CoefficientVector;
    use crate::reallocus::{canonicalize, known_frame, sample_locus};
    use crate::rng::{normal, substream};

    fn known() -> RealLocusPoint {
        RealLocusPoint::new(&CoefficientVector::standard(), known_frame()).unwrap()
    }

    #[test]
    fn uv_split_examples() {
        let (u, v) = uv_split(&[-1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!((u, v), ([-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]));
        assert!(matches!(
            uv_split(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn so3_examples() {
        let r = so3_matrix(&[-1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            (r.column(0), r.column(1), r.column(2)),
            ([-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0])
        );
        let r = so3_matrix(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(r, Rotation::identity());
        let u = [0.3, -1.0, 2.0];
        let v = [2.0, 0.2, -0.2];
        let a = so3_matrix(&u.map(|x: f64| -x), &v.map(|x: f64| -x)).unwrap();
        assert!(a.max_abs_diff(&so3_matrix(&u, &v).unwrap().times_sigma()) < 1e-12);
        assert!(so3_matrix(&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn lift_examples() {
        let [q, mq] = quaternion_lift(&Rotation::identity()).unwrap();
        assert_eq!(q.components(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(mq.components(), [-1.0, -0.0, -0.0, -0.0]);
        let s = Rotation::new(sigma()).unwrap();
        let [q, _] = quaternion_lift(&s).unwrap();
        assert!(q.distance(&UnitQuaternion::k()) < 1e-15);
        assert!(UnitQuaternion::k().rotation().max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn lift_round_trip() {
        let mut rng = substream(51, 0);
        for _ in 0..100 {
            let c: [f64; 4] = core::array::from_fn(|_| normal(&mut rng));
            let n = libm::sqrt(c.iter().map(|x| x * x).sum());
            let q = UnitQuaternion::new(c[0] / n, c[1] / n, c[2] / n, c[3] / n).unwrap();
            let r = q.rotation();
            let [a, b] = quaternion_lift(&r).unwrap();
            assert!(a.rotation().max_abs_diff(&r) < 1e-10 && b.rotation().max_abs_diff(&r) < 1e-10);
            assert!(a.distance(&q).min(a.distance(&q.neg())) < 1e-10);
        }
    }

    #[test]
    fn identity_coset_is_the_group() {
        let set = coset_of(&Rotation::identity()).unwrap();
        let group = [
            UnitQuaternion::one(),
            UnitQuaternion::one().neg(),
            UnitQuaternion::k(),
            UnitQuaternion::k().neg(),
        ];
        assert!(set_distance(&set, &group) < 1e-15);
    }

    #[test]
    fn cosets_close_under_k_and_respect_equivalence() {
        let c = CoefficientVector::standard();
        for p in sample_locus(&c, 50, 8).unwrap() {
            let set = z4_coset(&p).unwrap();
            assert!(k_closure_residual(&set) < 1e-10);
            let q = canonicalize(&c, &p).unwrap();
            assert!(set_distance(&set, &z4_coset(&q).unwrap()) < 1e-9);
            assert!(bundle_projection_consistency(&p).unwrap() < 1e-9);
        }
    }

    #[test]
    fn known_point_projections_agree() {
        assert!(bundle_projection_consistency(&known()).unwrap() < 1e-12);
        assert!(line_angle(&[0.0, 0.0, 1.0], &[0.0, 0.0, -1.0]) < 1e-15);
    }
}
