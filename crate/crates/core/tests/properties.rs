use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use slag_core::exactpoly::{
    int, jacobian_determinant, parse_expression, ratio, variables, Polynomial, RationalFunction,
    Variables,
};
use slag_core::grassmann::atlas::{first_type_formula, ZETA};
use slag_core::grassmann::{
    chart_coords, frame_action, frame_from_chart, pluecker, quadric_residual, transition, Chart,
    ChartPoint, Frame,
};
use slag_core::hypersurface::{chart_expression, eval_f, quartic_form, CoefficientVector, Preset};
use slag_core::reallocus::{locus_residuals, psi_frame, split_quartic};

fn rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn vars3() -> Variables {
    variables(&["x", "y", "z"])
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), rational()), 0..5)
        .prop_map(|terms| Polynomial::from_terms(vars3(), terms).unwrap())
}

fn frame() -> impl Strategy<Value = Frame<BigRational>> {
    (
        prop::array::uniform4(rational()),
        prop::array::uniform4(rational()),
    )
        .prop_filter_map("degenerate", |(u, v)| Frame::new(u, v).ok())
}

fn action() -> impl Strategy<Value = [BigRational; 4]> {
    prop::array::uniform4(rational())
        .prop_filter("singular", |m| !(&m[0] * &m[3] - &m[1] * &m[2]).is_zero())
}

fn preset() -> impl Strategy<Value = CoefficientVector> {
    prop::sample::select(Preset::ALL.to_vec()).prop_map(CoefficientVector::preset)
}

fn pow4(x: &BigRational) -> BigRational {
    let x2 = x * x;
    &x2 * &x2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in polynomial(), b in polynomial(), x in prop::collection::vec(rational(), 3)) {
        let ea = a.evaluate(&x).unwrap();
        let eb = b.evaluate(&x).unwrap();
        prop_assert_eq!((&a * &b).evaluate(&x).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&x).unwrap(), ea + eb);
    }

    #[test]
    fn leibniz_rule(a in polynomial(), b in polynomial(), i in 0usize..3) {
        prop_assert_eq!((&a * &b).derivative(i), &(&a.derivative(i) * &b) + &(&a * &b.derivative(i)));
    }

    #[test]
    fn display_round_trips(a in polynomial()) {
        let text = a.to_string();
        prop_assert_eq!(parse_expression(&text, &["x", "y", "z"]).unwrap(), a);
    }

    #[test]
    fn quadric_vanishes_and_pluecker_is_equivariant(f in frame(), m in action()) {
        let eta = pluecker(&f).unwrap();
        let eta = eta.eta().clone();
        prop_assert!(quadric_residual(&eta).is_zero());
        let g = frame_action(&f, &m[0], &m[1], &m[2], &m[3]).unwrap();
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        let scaled: [BigRational; 6] = eta.map(|x| x * &det);
        prop_assert_eq!(pluecker(&g).unwrap().into_eta(), scaled);
    }

    #[test]
    fn global_and_chart_quartics_agree(f in frame(), c in preset()) {
        let eta = pluecker(&f).unwrap();
        prop_assert_eq!(eval_f(&c, &f).unwrap(), quartic_form(&c, eta.eta()));
        for chart in Chart::ALL {
            let Ok(p) = chart_coords(&f, chart) else { continue };
            let (i, j) = chart.rows();
            let local = chart_expression(&c, chart).evaluate(&p.zeta).unwrap();
            prop_assert_eq!(local * pow4(&f.minor(i, j)), eval_f(&c, &f).unwrap());
        }
    }

    #[test]
    fn residual_split_matches_quartic(f in frame(), c in preset()) {
        let (p, n) = locus_residuals(&c, &f).unwrap();
        prop_assert_eq!(&p - &n, eval_f(&c, &f).unwrap());
        prop_assert!(p >= BigRational::zero() && n >= BigRational::zero());
        prop_assert_eq!(split_quartic(&c, pluecker(&f).unwrap().eta()), (p, n));
    }

    #[test]
    fn transitions_round_trip_and_compose(f in frame()) {
        for a in Chart::ALL {
            let Ok(p) = chart_coords(&f, a) else { continue };
            let back = frame_from_chart(&p);
            prop_assert_eq!(chart_coords(&back, a).unwrap(), p.clone());
            for b in Chart::ALL {
                let Ok(q) = transition(&p, b) else { continue };
                prop_assert_eq!(transition(&q, a).unwrap(), p.clone());
                for c in Chart::ALL {
                    let Ok(r) = transition(&q, c) else { continue };
                    prop_assert_eq!(transition(&p, c).unwrap(), r);
                }
            }
        }
    }

    #[test]
    fn psi_tail_is_unimodular_invariant(f in frame(), b in rational(), c in rational(), a in nonzero_rational(), plus in any::<bool>()) {
        let s = if plus { int(1) } else { int(-1) };
        let d = (&b * &c + s) / &a;
        let g = frame_action(&f, &a, &b, &c, &d).unwrap();
        prop_assert_eq!(psi_frame(&f).1, psi_frame(&g).1);
        prop_assert_eq!(psi_frame(&f).0, psi_frame(&g).0);
    }

    #[test]
    fn chart_points_lie_in_their_chart(z in prop::array::uniform4(rational())) {
        for chart in Chart::ALL {
            let p = ChartPoint::new(chart, z.clone());
            prop_assert_eq!(chart_coords(&frame_from_chart(&p), chart).unwrap(), p);
        }
    }
}

#[test]
fn composed_first_type_jacobian_is_product() {
    // J(T o T) = J(T)(T(z)) * J(T)(z), with T the first-type transition.
    let t = first_type_formula();
    let tt: Vec<RationalFunction> = t.iter().map(|r| r.compose(&t).unwrap()).collect();
    let j = jacobian_determinant(&t, &ZETA).unwrap();
    let jt = j.compose(&t).unwrap();
    let jtt = jacobian_determinant(&tt, &ZETA).unwrap();
    assert_eq!(jtt, &jt * &j);
}
