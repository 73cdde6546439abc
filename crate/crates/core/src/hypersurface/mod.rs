//! The quartic family `F_c = sum_a c_a eta_a^4` on G(2,4), its chart
//! expressions, the critical-point search and the residue 3-form.

mod coefficients;
mod numeric;
mod residue;
mod smoothness;

pub use coefficients::{CoefficientVector, Preset};
pub use numeric::{ChartSystem, CompiledPolynomial};
pub use residue::{
    residue_chart_consistency, residue_form, HypersurfaceChart, HypersurfacePoint, PIVOT_TOL,
    TANGENT_TOL,
};
pub use smoothness::{
    chart_tag, newton_critical, run_start, smoothness_search, smoothness_search_polynomial,
    start_point, SearchSettings, SmoothnessReport, StartOutcome, Witness,
};

use crate::error::Result;
use crate::exactpoly::Polynomial;
use crate::grassmann::atlas::{pluecker_ratios, zeta_variables};
use crate::grassmann::{pluecker, Chart, Frame};
use crate::scalar::Scalar;

/// `sum_a c_a eta_a^4` at the Pluecker point of `f`.
///
/// Homogeneous of degree 4 under the frame action: scales by `(ad - bc)^4`.
pub fn eval_f<T: Scalar>(c: &CoefficientVector, f: &Frame<T>) -> Result<T> {
    let eta = pluecker(f)?;
    Ok(quartic_form(c, eta.eta()))
}

/// `sum_a c_a eta_a^4` for raw coordinates.
pub fn quartic_form<T: Scalar>(c: &CoefficientVector, eta: &[T; 6]) -> T {
    eta.iter().zip(c.values()).fold(T::zero(), |acc, (e, ca)| {
        let e2 = e.clone() * e.clone();
        acc + T::from_rational(ca) * e2.clone() * e2
    })
}

/// The chart-local expression `f_{c,ij} = F_c / m_ij^4` in `z1..z4`.
pub fn chart_expression(c: &CoefficientVector, chart: Chart) -> Polynomial {
    let vars = zeta_variables();
    let ratios = pluecker_ratios(chart, &vars);
    ratios
        .iter()
        .zip(c.values())
        .fold(Polynomial::zero(vars.clone()), |acc, (r, ca)| {
            &acc + &r.pow(4).scale(ca)
        })
}

/// The four partials of the chart expression, divided by the common factor 4.
pub fn gradient_system(c: &CoefficientVector, chart: Chart) -> [Polynomial; 4] {
    let f = chart_expression(c, chart);
    let quarter = crate::exactpoly::ratio(1, 4);
    core::array::from_fn(|i| f.derivative(i).scale(&quarter))
}
