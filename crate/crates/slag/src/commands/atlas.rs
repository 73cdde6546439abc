use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;
use slag_core::grassmann::atlas::{
    first_type_formula, mirrored_first_type_formula, second_type_formula, verify_all_overlaps,
    verify_transition_identities,
};
use slag_core::grassmann::{
    chart_coords, frame_action, pluecker, quadric_residual, transition, Chart, Frame,
};
use slag_core::rng::{rational, stream_id, substream, StreamRng};

use super::timed;
use crate::config::RunConfig;
use crate::report::{Check, Report};

const ATLAS_TAG: u16 = 0x4100;

#[derive(Clone, Copy, Debug, Default)]
pub struct AtlasOptions {
    /// Replace the first-type map by its sign-flipped variant.
    pub corrupt_transition: bool,
    pub quadric_frames: usize,
    pub actions: usize,
    pub cocycle_frames: usize,
}

impl AtlasOptions {
    pub fn standard() -> Self {
        AtlasOptions {
            corrupt_transition: false,
            quadric_frames: 1000,
            actions: 200,
            cocycle_frames: 100,
        }
    }
}

fn random_frame(rng: &mut StreamRng) -> Frame<BigRational> {
    loop {
        let u: [BigRational; 4] = std::array::from_fn(|_| rational(rng, 9, 5));
        let v: [BigRational; 4] = std::array::from_fn(|_| rational(rng, 9, 5));
        if let Ok(f) = Frame::new(u, v) {
            return f;
        }
    }
}

/// Exact transition identities plus quadric, equivariance and cocycle suites.
pub fn atlas_check(cfg: &RunConfig, opts: &AtlasOptions) -> Report {
    let mut report = Report::new("atlas-check", cfg.echo());
    let mut timings = std::mem::take(&mut report.timings);

    let first = if opts.corrupt_transition {
        mirrored_first_type_formula()
    } else {
        first_type_formula()
    };
    let identities = timed(&mut timings, "identities", || {
        let mut r = verify_transition_identities(&first, &second_type_formula());
        r.identities.extend(verify_all_overlaps());
        r
    });
    for id in &identities.identities {
        let mut check = Check::flag(&id.name, id.passed).with_detail(format!(
            "expected {}, computed {}",
            id.expected, id.computed
        ));
        check.mandatory = id.mandatory;
        report.push(check);
    }
    let dets: Vec<_> = identities
        .identities
        .iter()
        .take(2)
        .map(|id| json!({ "name": id.name, "expected": id.expected, "computed": id.computed }))
        .collect();
    report.details.insert("determinants".into(), json!(dets));

    let mut rng = substream(cfg.seed, stream_id(ATLAS_TAG, 0));
    let bad_quadric = timed(&mut timings, "quadric", || {
        (0..opts.quadric_frames)
            .filter(|_| {
                let f = random_frame(&mut rng);
                !quadric_residual(pluecker(&f).expect("nondegenerate").eta()).is_zero()
            })
            .count()
    });
    report.push(Check::flag(
        format!(
            "quadric residual is zero on {} rational frames",
            opts.quadric_frames
        ),
        bad_quadric == 0,
    ));

    let mut rng = substream(cfg.seed, stream_id(ATLAS_TAG, 1));
    let bad_equivariance = timed(&mut timings, "equivariance", || {
        let mut bad = 0;
        let mut done = 0;
        while done < opts.actions {
            let f = random_frame(&mut rng);
            let m: [BigRational; 4] = std::array::from_fn(|_| rational(&mut rng, 6, 4));
            let Ok(g) = frame_action(&f, &m[0], &m[1], &m[2], &m[3]) else {
                continue;
            };
            let det = &m[0] * &m[3] - &m[1] * &m[2];
            let expected = pluecker(&f).unwrap().into_eta().map(|x| x * &det);
            if pluecker(&g).unwrap().into_eta() != expected {
                bad += 1;
            }
            done += 1;
        }
        bad
    });
    report.push(Check::flag(
        format!("Pluecker equivariance on {} actions", opts.actions),
        bad_equivariance == 0,
    ));

    let mut rng = substream(cfg.seed, stream_id(ATLAS_TAG, 2));
    let bad_cocycle = timed(&mut timings, "cocycle", || {
        let mut bad = 0;
        for _ in 0..opts.cocycle_frames {
            let f = random_frame(&mut rng);
            for a in Chart::ALL {
                let Ok(p) = chart_coords(&f, a) else { continue };
                for b in Chart::ALL {
                    let Ok(q) = transition(&p, b) else { continue };
                    for c in Chart::ALL {
                        let Ok(direct) = transition(&p, c) else {
                            continue;
                        };
                        if transition(&q, c).ok() != Some(direct.clone())
                            || chart_coords(&f, c).ok() != Some(direct)
                        {
                            bad += 1;
                        }
                    }
                }
            }
        }
        bad
    });
    report.push(Check::flag(
        format!(
            "transition cocycle on {} rational frames",
            opts.cocycle_frames
        ),
        bad_cocycle == 0,
    ));

    if opts.corrupt_transition {
        report
            .notes
            .push("first-type transition deliberately corrupted".into());
    }
    report.timings = timings;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AtlasOptions {
        AtlasOptions {
            corrupt_transition: false,
            quadric_frames: 20,
            actions: 10,
            cocycle_frames: 3,
        }
    }

    #[test]
    fn default_run_passes() {
        let r = atlas_check(&RunConfig::default(), &small());
        assert!(r.passed(), "{}", r.summary());
        assert!(r
            .check("first-type Jacobian determinant")
            .unwrap()
            .detail
            .as_ref()
            .unwrap()
            .contains("z1^4"));
    }

    #[test]
    fn corrupted_run_names_the_identity() {
        let r = atlas_check(
            &RunConfig::default(),
            &AtlasOptions {
                corrupt_transition: true,
                ..small()
            },
        );
        assert!(!r.passed());
        assert!(!r.check("first-type Jacobian determinant").unwrap().passed);
    }
}
