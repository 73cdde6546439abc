//! Symbolic chart maps and exact certification of the transition Jacobians.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{pair_index, Chart, PAIRS};
use crate::exactpoly::{
    int, jacobian_determinant, parse_with, variables, Polynomial, RationalFunction, Variables,
};

/// Names of the chart coordinates.
pub const ZETA: [&str; 4] = ["z1", "z2", "z3", "z4"];

pub fn zeta_variables() -> Variables {
    variables(&ZETA)
}

fn poly(text: &str, vars: &Variables) -> Polynomial {
    parse_with(text, vars.clone()).expect("static expression")
}

/// The six Pluecker coordinates divided by the chart's pivot minor, as
/// polynomials in the chart coordinates.
pub fn pluecker_ratios(chart: Chart, vars: &Variables) -> [Polynomial; 6] {
    let (i, j) = chart.rows();
    let (k, l) = chart.complement();
    let zeta: [Polynomial; 4] = core::array::from_fn(|a| Polynomial::var(vars.clone(), a));
    let w: [Polynomial; 4] = {
        let r = chart.relabeling();
        let mut w: [Polynomial; 4] = core::array::from_fn(|_| Polynomial::zero(vars.clone()));
        for a in 0..4 {
            w[r[a].0] = if r[a].1 { -&zeta[a] } else { zeta[a].clone() };
        }
        w
    };
    let d = &(&w[0] * &w[3]) - &(&w[1] * &w[2]);
    // (ordered pair, value of m_pair / m_ij)
    let known: [((usize, usize), Polynomial); 6] = [
        ((i, j), Polynomial::one(vars.clone())),
        ((i, k), w[0].clone()),
        ((i, l), w[1].clone()),
        ((k, j), w[2].clone()),
        ((l, j), w[3].clone()),
        ((k, l), -&d),
    ];
    core::array::from_fn(|n| {
        let (a, b) = PAIRS[n];
        known
            .iter()
            .find_map(|((x, y), p)| {
                if (*x, *y) == (a, b) {
                    Some(p.clone())
                } else if (*y, *x) == (a, b) {
                    Some(-p)
                } else {
                    None
                }
            })
            .expect("every pair appears once")
    })
}

/// Exact change of chart from `from` to `to` as rational functions of the
/// source coordinates.
pub fn transition_map(from: Chart, to: Chart) -> [RationalFunction; 4] {
    let vars = zeta_variables();
    let ratios = pluecker_ratios(from, &vars);
    let m = |a: usize, b: usize| -> Polynomial {
        let p = &ratios[pair_index(a, b)];
        if a < b {
            p.clone()
        } else {
            -p
        }
    };
    let (i, j) = to.rows();
    let (k, l) = to.complement();
    let pivot = m(i, j);
    let w = [m(i, k), m(i, l), m(k, j), m(l, j)].map(|n| {
        RationalFunction::new(n, pivot.clone()).expect("pivot minor is not identically zero")
    });
    let r = to.relabeling();
    core::array::from_fn(|a| {
        if r[a].1 {
            -&w[r[a].0]
        } else {
            w[r[a].0].clone()
        }
    })
}

fn rf(num: &str, den: &str, vars: &Variables) -> RationalFunction {
    RationalFunction::new(poly(num, vars), poly(den, vars)).expect("nonzero denominator")
}

const D: &str = "(z1*z4 - z2*z3)";

/// `(-z2/z1, 1/z1, -D/z1, -z3/z1)`: the change of chart U01 -> U02.
pub fn first_type_formula() -> [RationalFunction; 4] {
    let v = zeta_variables();
    [
        rf("-z2", "z1", &v),
        rf("1", "z1", &v),
        rf(&format!("-{D}"), "z1", &v),
        rf("-z3", "z1", &v),
    ]
}

/// `(-z2/z1, 1/z1, -D/z1, z3/z1)`: the first-type formula with the last
/// coordinate mirrored. Orientation-reversing, its determinant is `-1/z1^4`.
pub fn mirrored_first_type_formula() -> [RationalFunction; 4] {
    let v = zeta_variables();
    [
        rf("-z2", "z1", &v),
        rf("1", "z1", &v),
        rf(&format!("-{D}"), "z1", &v),
        rf("z3", "z1", &v),
    ]
}

/// `(-z4/D, z2/D, z3/D, -z1/D)`: the change of chart U01 -> U23.
pub fn second_type_formula() -> [RationalFunction; 4] {
    let v = zeta_variables();
    [
        rf("-z4", D, &v),
        rf("z2", D, &v),
        rf("z3", D, &v),
        rf("-z1", D, &v),
    ]
}

/// One certified (or refuted) symbolic identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    /// Mandatory identities decide the report's overall status.
    pub mandatory: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtlasReport {
    pub identities: Vec<IdentityCheck>,
}

impl AtlasReport {
    pub fn passed(&self) -> bool {
        self.identities
            .iter()
            .filter(|c| c.mandatory)
            .all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identities.iter().filter(|c| c.mandatory && !c.passed)
    }
}

fn det_check(
    name: &str,
    map: &[RationalFunction; 4],
    expected: &RationalFunction,
    mandatory: bool,
) -> IdentityCheck {
    let (computed, passed) = match jacobian_determinant(map, &ZETA) {
        Ok(det) => {
            let ok = det == *expected;
            (det.to_string(), ok)
        }
        Err(e) => (format!("error: {e}"), false),
    };
    IdentityCheck {
        name: name.to_string(),
        expected: expected.to_string(),
        computed,
        passed,
        mandatory,
    }
}

fn map_string(map: &[RationalFunction; 4]) -> String {
    let parts: Vec<String> = map.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Certifies `det = 1/z1^4` for `first` and `det = 1/D^4` for `second`, plus
/// that the atlas transitions U01 -> U02 and U01 -> U23 are exactly these maps.
///
/// Taking the maps as arguments lets callers inject a corrupted transition.
pub fn verify_transition_identities(
    first: &[RationalFunction; 4],
    second: &[RationalFunction; 4],
) -> AtlasReport {
    let v = zeta_variables();
    let u01 = Chart::new(0, 1).unwrap();
    let mut identities = Vec::new();

    identities.push(det_check(
        "first-type Jacobian determinant",
        first,
        &rf("1", "z1^4", &v),
        true,
    ));
    identities.push(det_check(
        "second-type Jacobian determinant",
        second,
        &rf("1", &format!("{D}^4"), &v),
        true,
    ));

    let atlas_first = transition_map(u01, Chart::new(0, 2).unwrap());
    identities.push(IdentityCheck {
        name: "atlas transition U01 -> U02 equals the first-type map".to_string(),
        expected: map_string(first),
        computed: map_string(&atlas_first),
        passed: atlas_first == *first,
        mandatory: true,
    });
    let atlas_second = transition_map(u01, Chart::new(2, 3).unwrap());
    identities.push(IdentityCheck {
        name: "atlas transition U01 -> U23 equals the second-type map".to_string(),
        expected: map_string(second),
        computed: map_string(&atlas_second),
        passed: atlas_second == *second,
        mandatory: true,
    });

    identities.push(det_check(
        "mirrored first-type variant (last coordinate +z3/z1) is orientation-reversing",
        &mirrored_first_type_formula(),
        &rf("-1", "z1^4", &v),
        false,
    ));
    AtlasReport { identities }
}

/// Runs [`verify_transition_identities`] on the atlas's own maps, and checks
/// that all 30 ordered transitions carry the holomorphic 4-form:
/// `det J = (m_from / m_to)^4`.
pub fn verify_transition_jacobians() -> AtlasReport {
    let mut report = verify_transition_identities(&first_type_formula(), &second_type_formula());
    report.identities.extend(verify_all_overlaps());
    report
}

/// `det J_{from -> to} = (1 / R_to)^4`, where `R_to` is the target pivot minor
/// divided by the source pivot minor, for every ordered pair of charts.
pub fn verify_all_overlaps() -> Vec<IdentityCheck> {
    let v = zeta_variables();
    let mut out = Vec::new();
    for from in Chart::ALL {
        let ratios = pluecker_ratios(from, &v);
        for to in Chart::ALL {
            if from == to {
                continue;
            }
            let pivot = ratios[to.pivot()].clone();
            let expected = RationalFunction::new(Polynomial::one(v.clone()), pivot.pow(4)).unwrap();
            out.push(det_check(
                &format!("{from} -> {to} Jacobian carries the 4-form"),
                &transition_map(from, to),
                &expected,
                true,
            ));
        }
    }
    out
}

/// The pivot ratio of a chart is identically one.
pub fn pivot_ratio_is_one(chart: Chart) -> bool {
    let v = zeta_variables();
    pluecker_ratios(chart, &v)[chart.pivot()] == Polynomial::constant(v, int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, ratio};
    use crate::grassmann::{chart_coords, frame_from_chart, transition, ChartPoint, Frame};
    use num_rational::BigRational;

    #[test]
    fn atlas_report_passes() {
        let r = verify_transition_jacobians();
        for c in &r.identities {
            assert!(
                c.passed,
                "{}: expected {} got {}",
                c.name, c.expected, c.computed
            );
        }
        assert!(r.passed());
        assert_eq!(r.identities.len(), 5 + 30);
    }

    #[test]
    fn corrupted_transition_is_named() {
        let mut bad = first_type_formula();
        bad[0] = &bad[0] + &RationalFunction::one(zeta_variables());
        let r = verify_transition_identities(&bad, &second_type_formula());
        assert!(!r.passed());
        let names: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
        assert!(names.iter().any(|n| n.contains("U01 -> U02")), "{names:?}");
    }

    #[test]
    fn symbolic_and_numeric_transitions_agree() {
        let u01 = Chart::new(0, 1).unwrap();
        let z = [ratio(1, 2), int(3), ratio(-2, 5), int(7)];
        let p = ChartPoint::new(u01, z.clone());
        for to in Chart::ALL {
            let map = transition_map(u01, to);
            let q = transition(&p, to).unwrap();
            for a in 0..4 {
                assert_eq!(map[a].evaluate(&z).unwrap(), q.zeta[a]);
            }
        }
    }

    #[test]
    fn pluecker_ratios_match_frames() {
        let v = zeta_variables();
        let z = [ratio(1, 3), int(-2), int(5), ratio(7, 2)];
        for c in Chart::ALL {
            let f: Frame<BigRational> = frame_from_chart(&ChartPoint::new(c, z.clone()));
            let eta = crate::grassmann::pluecker(&f).unwrap();
            let ratios = pluecker_ratios(c, &v);
            let pivot = eta.eta()[c.pivot()].clone();
            for n in 0..6 {
                assert_eq!(ratios[n].evaluate(&z).unwrap() * &pivot, eta.eta()[n]);
            }
            assert_eq!(chart_coords(&f, c).unwrap().zeta, z);
            assert!(pivot_ratio_is_one(c));
        }
    }
}
