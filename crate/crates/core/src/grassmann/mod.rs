//! The G(2,4) chart atlas and the Pluecker embedding onto the Klein quadric.
//!
//! Frames, Pluecker points and chart points are generic over [`Scalar`], so
//! the same code runs exactly on rationals and numerically on real or complex
//! doubles. Symbolic versions of the chart maps live in [`atlas`].

pub mod atlas;

use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{norm, Scalar};

/// Index pairs of the six Pluecker coordinates, in the order eta_0..eta_5.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Position of the sorted pair `(a, b)` in [`PAIRS`].
pub fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("distinct indices below 4")
}

/// Two vectors of a 4-space spanning a 2-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<T> {
    u: [T; 4],
    u_prime: [T; 4],
}

impl<T: Scalar> Frame<T> {
    /// Builds a frame, rejecting linearly dependent pairs.
    pub fn new(u: [T; 4], u_prime: [T; 4]) -> Result<Self> {
        let f = Frame { u, u_prime };
        let scale = norm(&f.u) * norm(&f.u_prime);
        if PAIRS
            .iter()
            .all(|&(a, b)| f.minor(a, b).is_negligible(scale))
        {
            return Err(Error::DegenerateFrame);
        }
        Ok(f)
    }

    pub fn u(&self) -> &[T; 4] {
        &self.u
    }

    pub fn u_prime(&self) -> &[T; 4] {
        &self.u_prime
    }

    /// The eight coordinates `(u, u')`.
    pub fn coordinates(&self) -> [T; 8] {
        core::array::from_fn(|i| {
            if i < 4 {
                self.u[i].clone()
            } else {
                self.u_prime[i - 4].clone()
            }
        })
    }

    pub fn from_coordinates(x: &[T; 8]) -> Result<Self> {
        Frame::new(
            core::array::from_fn(|i| x[i].clone()),
            core::array::from_fn(|i| x[i + 4].clone()),
        )
    }

    /// `u_a u'_b - u_b u'_a`.
    pub fn minor(&self, a: usize, b: usize) -> T {
        self.u[a].clone() * self.u_prime[b].clone() - self.u[b].clone() * self.u_prime[a].clone()
    }

    fn scale(&self) -> f64 {
        norm(&self.u) * norm(&self.u_prime)
    }
}

/// Homogeneous coordinates `(eta_0, ..., eta_5)` on the Klein quadric.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerPoint<T> {
    eta: [T; 6],
}

/// `eta_0 eta_5 - eta_1 eta_4 + eta_2 eta_3`.
pub fn quadric_residual<T: Scalar>(eta: &[T; 6]) -> T {
    eta[0].clone() * eta[5].clone() - eta[1].clone() * eta[4].clone()
        + eta[2].clone() * eta[3].clone()
}

impl<T: Scalar> PlueckerPoint<T> {
    /// Validates a coordinate vector: nonzero and on the quadric (exactly for
    /// rationals, to `1e-12 * |eta|^2` for floats).
    pub fn new(eta: [T; 6]) -> Result<Self> {
        let n = norm(&eta);
        if eta
            .iter()
            .all(|e| e.is_negligible(n.max(f64::MIN_POSITIVE)))
            || n == 0.0
        {
            return Err(Error::NotPluecker("all coordinates vanish"));
        }
        if !quadric_residual(&eta).is_negligible(n * n) {
            return Err(Error::NotPluecker("quadric relation fails"));
        }
        Ok(PlueckerPoint { eta })
    }

    pub fn eta(&self) -> &[T; 6] {
        &self.eta
    }

    pub fn into_eta(self) -> [T; 6] {
        self.eta
    }

    pub fn quadric_residual(&self) -> T {
        quadric_residual(&self.eta)
    }

    /// `m_ab` for any ordered pair, using antisymmetry.
    pub fn signed_minor(&self, a: usize, b: usize) -> T {
        let e = self.eta[pair_index(a, b)].clone();
        if a < b {
            e
        } else {
            -e
        }
    }
}

impl<T: fmt::Display> fmt::Display for PlueckerPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.eta.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// The six 2x2 minors of the frame in the order of [`PAIRS`].
pub fn pluecker<T: Scalar>(f: &Frame<T>) -> Result<PlueckerPoint<T>> {
    let eta: [T; 6] = core::array::from_fn(|k| f.minor(PAIRS[k].0, PAIRS[k].1));
    let scale = f.scale();
    if eta.iter().all(|e| e.is_negligible(scale)) {
        return Err(Error::DegenerateFrame);
    }
    PlueckerPoint::new(eta)
}

/// Derivative of the Pluecker map at `f` in the direction `(du, du')`.
pub fn pluecker_differential<T: Scalar>(f: &Frame<T>, d: &[T; 8]) -> [T; 6] {
    core::array::from_fn(|k| {
        let (a, b) = PAIRS[k];
        minor_derivative(f, d, a, b)
    })
}

fn minor_derivative<T: Scalar>(f: &Frame<T>, d: &[T; 8], a: usize, b: usize) -> T {
    let (u, up) = (&f.u, &f.u_prime);
    d[a].clone() * up[b].clone() + u[a].clone() * d[4 + b].clone()
        - d[b].clone() * up[a].clone()
        - u[b].clone() * d[4 + a].clone()
}

/// The right action `(v, v') = (a u + c u', b u + d u')`.
///
/// Pluecker coordinates scale by `ad - bc`.
pub fn frame_action<T: Scalar>(f: &Frame<T>, a: &T, b: &T, c: &T, d: &T) -> Result<Frame<T>> {
    let det = a.clone() * d.clone() - b.clone() * c.clone();
    let scale = (a.modulus() + b.modulus()) * (c.modulus() + d.modulus());
    if det.is_negligible(scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::SingularAction);
    }
    let v = core::array::from_fn(|i| a.clone() * f.u[i].clone() + c.clone() * f.u_prime[i].clone());
    let vp =
        core::array::from_fn(|i| b.clone() * f.u[i].clone() + d.clone() * f.u_prime[i].clone());
    Frame::new(v, vp)
}

/// One of the six standard charts `U_ij = { m_ij != 0 }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chart {
    i: u8,
    j: u8,
}

impl Chart {
    pub const ALL: [Chart; 6] = [
        Chart { i: 0, j: 1 },
        Chart { i: 0, j: 2 },
        Chart { i: 0, j: 3 },
        Chart { i: 1, j: 2 },
        Chart { i: 1, j: 3 },
        Chart { i: 2, j: 3 },
    ];

    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i < j && j <= 3 {
            Ok(Chart {
                i: i as u8,
                j: j as u8,
            })
        } else {
            Err(Error::InvalidChart(i, j))
        }
    }

    pub fn rows(self) -> (usize, usize) {
        (self.i as usize, self.j as usize)
    }

    /// The complementary rows, increasing.
    pub fn complement(self) -> (usize, usize) {
        let mut it = (0..4).filter(|&r| r != self.i as usize && r != self.j as usize);
        (it.next().unwrap(), it.next().unwrap())
    }

    /// Index of this chart's pivot minor among the Pluecker coordinates.
    pub fn pivot(self) -> usize {
        pair_index(self.i as usize, self.j as usize)
    }

    /// Signed permutation from the row-quotient coordinates `w` to the chart
    /// coordinates: `zeta_a = (-1)^neg_a * w[src_a]`.
    ///
    /// U02 and U23 are relabeled so that the transitions out of U01 are exactly
    /// the two standard change-of-chart formulas; both relabelings have
    /// determinant +1, so the holomorphic 4-form needs no sign correction.
    pub(crate) fn relabeling(self) -> [(usize, bool); 4] {
        match (self.i, self.j) {
            (0, 2) => [(1, true), (0, false), (3, true), (2, false)],
            (2, 3) => [(3, true), (2, true), (1, true), (0, true)],
            _ => [(0, false), (1, false), (2, false), (3, false)],
        }
    }

    pub(crate) fn to_chart<T: Scalar>(self, w: [T; 4]) -> [T; 4] {
        let r = self.relabeling();
        core::array::from_fn(|a| {
            let x = w[r[a].0].clone();
            if r[a].1 {
                -x
            } else {
                x
            }
        })
    }

    pub(crate) fn to_row_quotient<T: Scalar>(self, zeta: &[T; 4]) -> [T; 4] {
        let r = self.relabeling();
        let mut w: [T; 4] = core::array::from_fn(|_| T::zero());
        for a in 0..4 {
            let x = zeta[a].clone();
            w[r[a].0] = if r[a].1 { -x } else { x };
        }
        w
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}{}", self.i, self.j)
    }
}

/// Affine coordinates `(zeta_1, .., zeta_4)` in a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint<T> {
    pub chart: Chart,
    pub zeta: [T; 4],
}

impl<T: Scalar> ChartPoint<T> {
    pub fn new(chart: Chart, zeta: [T; 4]) -> Self {
        ChartPoint { chart, zeta }
    }

    /// `zeta_1 zeta_4 - zeta_2 zeta_3`.
    pub fn d(&self) -> T {
        let z = &self.zeta;
        z[0].clone() * z[3].clone() - z[1].clone() * z[2].clone()
    }
}

/// Chart coordinates of the plane spanned by `f`.
///
/// With rows `(i, j)` as the invertible block `A` and the complementary rows
/// `(k, l)` as `B`, the matrix `B A^{-1}` is `((w3, w1), (w4, w2))`, i.e.
/// `w = (m_ik, m_il, m_kj, m_lj) / m_ij`; the chart's relabeling is then
/// applied. For U01 this is `((zeta_3, zeta_1), (zeta_4, zeta_2))`.
pub fn chart_coords<T: Scalar>(f: &Frame<T>, chart: Chart) -> Result<ChartPoint<T>> {
    let (i, j) = chart.rows();
    let (k, l) = chart.complement();
    let mij = f.minor(i, j);
    if mij.is_negligible(f.scale()) {
        return Err(Error::NotInChart(chart.i, chart.j));
    }
    let w = [f.minor(i, k), f.minor(i, l), f.minor(k, j), f.minor(l, j)].map(|m| m / mij.clone());
    Ok(ChartPoint {
        chart,
        zeta: chart.to_chart(w),
    })
}

/// Frame with the identity in rows `(i, j)` representing a chart point.
pub fn frame_from_chart<T: Scalar>(p: &ChartPoint<T>) -> Frame<T> {
    let (i, j) = p.chart.rows();
    let (k, l) = p.chart.complement();
    let w = p.chart.to_row_quotient(&p.zeta);
    let mut u: [T; 4] = core::array::from_fn(|_| T::zero());
    let mut up: [T; 4] = core::array::from_fn(|_| T::zero());
    u[i] = T::one();
    up[j] = T::one();
    u[k] = w[2].clone();
    up[k] = w[0].clone();
    u[l] = w[3].clone();
    up[l] = w[1].clone();
    Frame { u, u_prime: up }
}

/// Change of chart. Goes through a representing frame, so compositions agree
/// with direct transitions by construction.
pub fn transition<T: Scalar>(p: &ChartPoint<T>, target: Chart) -> Result<ChartPoint<T>> {
    if target == p.chart {
        return Ok(p.clone());
    }
    chart_coords(&frame_from_chart(p), target)
}

/// Derivative of `chart_coords(., chart)` at `f` in the frame direction `d`.
pub fn chart_coords_differential<T: Scalar>(
    f: &Frame<T>,
    d: &[T; 8],
    chart: Chart,
) -> Result<[T; 4]> {
    let (i, j) = chart.rows();
    let (k, l) = chart.complement();
    let mij = f.minor(i, j);
    if mij.is_negligible(f.scale()) {
        return Err(Error::NotInChart(chart.i, chart.j));
    }
    let dmij = minor_derivative(f, d, i, j);
    let pairs = [(i, k), (i, l), (k, j), (l, j)];
    let den = mij.clone() * mij.clone();
    let dw = pairs.map(|(a, b)| {
        (minor_derivative(f, d, a, b) * mij.clone() - f.minor(a, b) * dmij.clone()) / den.clone()
    });
    Ok(chart.to_chart(dw))
}

/// Pushes a tangent vector of the source chart through a change of chart.
pub fn transition_differential<T: Scalar>(
    p: &ChartPoint<T>,
    target: Chart,
    t: &[T; 4],
) -> Result<[T; 4]> {
    let f = frame_from_chart(p);
    chart_coords_differential(&f, &chart_tangent_to_frame(p.chart, t), target)
}

/// Frame direction corresponding to a chart tangent vector at the chart's
/// standard representative frame.
pub fn chart_tangent_to_frame<T: Scalar>(chart: Chart, t: &[T; 4]) -> [T; 8] {
    let (k, l) = chart.complement();
    let dw = chart.to_row_quotient(t);
    let mut d: [T; 8] = core::array::from_fn(|_| T::zero());
    d[k] = dw[2].clone();
    d[4 + k] = dw[0].clone();
    d[l] = dw[3].clone();
    d[4 + l] = dw[1].clone();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, ratio};
    use num_rational::BigRational;

    fn qf(u: [i64; 4], v: [i64; 4]) -> Frame<BigRational> {
        Frame::new(u.map(int), v.map(int)).unwrap()
    }

    #[test]
    fn standard_plane() {
        let f = qf([1, 0, 0, 0], [0, 1, 0, 0]);
        let eta = pluecker(&f).unwrap();
        assert_eq!(eta.eta(), &[1, 0, 0, 0, 0, 0].map(int));
        let p = chart_coords(&f, Chart::new(0, 1).unwrap()).unwrap();
        assert_eq!(p.zeta, [0, 0, 0, 0].map(int));
    }

    #[test]
    fn hand_expanded_minors() {
        let f = qf([0, 1, 0, 0], [1, 0, 1, 0]);
        assert_eq!(pluecker(&f).unwrap().eta(), &[-1, 0, 0, 1, 0, 0].map(int));
    }

    #[test]
    fn chart_coordinates_by_matrix_quotient() {
        let f = qf([1, 0, 1, 0], [0, 1, 0, 1]);
        let p = chart_coords(&f, Chart::new(0, 1).unwrap()).unwrap();
        assert_eq!(p.zeta, [0, 1, 1, 0].map(int));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            Frame::new([1, 2, 3, 4].map(int), [2, 4, 6, 8].map(int)),
            Err(Error::DegenerateFrame)
        );
        assert_eq!(
            Frame::new([1.0, 2.0, 3.0, 4.0], [2.0, 4.0, 6.0, 8.0 + 1e-15]),
            Err(Error::DegenerateFrame)
        );
        assert!(Frame::new([1.0, 2.0, 3.0, 4.0], [2.0, 4.0, 6.0, 8.1]).is_ok());
        let f = qf([1, 0, 0, 0], [0, 1, 0, 0]);
        assert_eq!(
            chart_coords(&f, Chart::new(2, 3).unwrap()),
            Err(Error::NotInChart(2, 3))
        );
        assert_eq!(Chart::new(2, 1), Err(Error::InvalidChart(2, 1)));
        assert_eq!(Chart::new(1, 4), Err(Error::InvalidChart(1, 4)));
        let (z, o) = (int(0), int(1));
        assert_eq!(frame_action(&f, &o, &o, &o, &o), Err(Error::SingularAction));
        assert_eq!(frame_action(&f, &z, &z, &z, &z), Err(Error::SingularAction));
    }

    #[test]
    fn frame_action_examples() {
        let f = qf([1, 0, 0, 0], [0, 1, 0, 0]);
        let (z, o, t) = (int(0), int(1), int(2));
        assert_eq!(frame_action(&f, &o, &z, &z, &o).unwrap(), f);
        let swapped = frame_action(&f, &z, &o, &o, &z).unwrap();
        assert_eq!(
            pluecker(&swapped).unwrap().eta(),
            &[-1, 0, 0, 0, 0, 0].map(int)
        );
        let scaled = frame_action(&f, &t, &z, &z, &o).unwrap();
        assert_eq!(
            pluecker(&scaled).unwrap().eta(),
            &[2, 0, 0, 0, 0, 0].map(int)
        );
    }

    #[test]
    fn first_and_second_type_transitions() {
        let u01 = Chart::new(0, 1).unwrap();
        let p = ChartPoint::new(u01, [1, 2, 3, 4].map(int));
        let q = transition(&p, Chart::new(0, 2).unwrap()).unwrap();
        assert_eq!(q.zeta, [-2, 1, 2, -3].map(int));
        let p = ChartPoint::new(u01, [1, 0, 0, 2].map(int));
        let q = transition(&p, Chart::new(2, 3).unwrap()).unwrap();
        assert_eq!(q.zeta, [int(-1), int(0), int(0), ratio(-1, 2)]);
        assert_eq!(transition(&p, u01).unwrap(), p);
        let origin = ChartPoint::new(u01, [0, 0, 0, 0].map(int));
        assert_eq!(
            transition(&origin, Chart::new(2, 3).unwrap()),
            Err(Error::NotInChart(2, 3))
        );
    }

    #[test]
    fn relabelings_invert() {
        for c in Chart::ALL {
            let z = [1, -2, 3, 5].map(int);
            assert_eq!(c.to_chart(c.to_row_quotient(&z)), z);
        }
    }

    #[test]
    fn pluecker_residual_rejection() {
        assert!(PlueckerPoint::new([1, 0, 0, 0, 0, 1].map(int)).is_err());
        assert!(PlueckerPoint::new([0, 0, 0, 0, 0, 0].map(int)).is_err());
        assert!(PlueckerPoint::new([1.0, 0.0, 0.0, 0.0, 0.0, 1e-13]).is_ok());
    }
}
