use waringlab::poly::{recompose, residual, HomogeneousPoly, WaringDecomposition};
use waringlab::rng::seeded;
use waringlab::vsp::{extend_decomposition, sample_vsp, sample_vsp_detailed, SAMPLE_TOL};
use waringlab::waring::{decompose_quintic, QuinticOptions};

#[test]
fn eight_term_quintic_contains_drawn_form() {
    let f = HomogeneousPoly::random(3, 5, true, &mut seeded(21));
    let s = sample_vsp_detailed(&f, 8, 4).unwrap();
    assert_eq!(s.decomposition.len(), 8);
    assert!(s.residual < SAMPLE_TOL);
    assert_eq!(s.drawn.len(), 1);
    assert!(s.decomposition.forms().any(|l| l.distance(&s.drawn[0]) < 1e-9));
}

#[test]
fn seven_terms_is_the_unique_decomposition() {
    let truth = WaringDecomposition::random(3, 5, 7, false, &mut seeded(22)).unwrap();
    let f = recompose(&truth);
    let a = sample_vsp(&f, 7, 1).unwrap();
    let b = sample_vsp(&f, 7, 2).unwrap();
    assert!(a.match_distance(&b) < 1e-6);
    assert!(a.match_distance(&truth) < 1e-6);
}

#[test]
fn quintic_samples_above_canonical_length_differ() {
    let f = HomogeneousPoly::random(3, 5, true, &mut seeded(23));
    let samples: Vec<_> = (0..4).map(|seed| sample_vsp(&f, 9, seed).unwrap()).collect();
    for (i, a) in samples.iter().enumerate() {
        assert!(residual(&f, a).unwrap() < SAMPLE_TOL);
        for b in &samples[i + 1..] {
            assert!(a.form_set_distance(b) > 1e-6);
        }
    }
}

#[test]
fn extending_a_quintic_decomposition() {
    let truth = WaringDecomposition::random(3, 5, 7, false, &mut seeded(24)).unwrap();
    let f = recompose(&truth);
    let dec = decompose_quintic(&f, 0, &QuinticOptions::default()).unwrap();
    let ext = extend_decomposition(&f, &dec, 8, 3).unwrap();
    assert_eq!(ext.len(), 8);
    assert!(residual(&f, &ext).unwrap() < SAMPLE_TOL);
    for l in dec.forms() {
        assert!(ext.forms().any(|m| m.distance(l) < 1e-9));
    }
    let mut stepwise = dec.clone();
    for step in 0..3 {
        stepwise = extend_decomposition(&f, &stepwise, stepwise.len() + 1, step).unwrap();
    }
    let direct = extend_decomposition(&f, &dec, 10, 7).unwrap();
    for d in [&stepwise, &direct] {
        assert_eq!(d.len(), 10);
        assert!(residual(&f, d).unwrap() < SAMPLE_TOL);
    }
}
