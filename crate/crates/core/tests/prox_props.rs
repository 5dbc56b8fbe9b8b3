mod common;

use antisparse::democratic::linf_norm;
use antisparse::prox::{gradient_step_prox, linf_threshold, project_l1_ball, prox_linf, prox_linf_in_place};
use antisparse::coder::CodingProblem;
use common::moreau_prox;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn vecs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-20.0f64..20.0, 1..64)
}

proptest! {
    #[test]
    fn matches_moreau_oracle(x in vecs(), w in 1e-3f64..10.0) {
        let p = prox_linf(&x, w);
        for (a, b) in p.iter().zip(moreau_prox(&x, w)) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn nonexpansive(x in vecs(), w in 1e-3f64..10.0, shift in -2.0f64..2.0) {
        let z: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + shift * (i as f64).sin()).collect();
        let (px, pz) = (prox_linf(&x, w), prox_linf(&z, w));
        let d_out: f64 = px.iter().zip(&pz).map(|(a, b)| (a - b).powi(2)).sum();
        let d_in: f64 = x.iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum();
        prop_assert!(d_out <= d_in + 1e-12);
    }

    #[test]
    fn firm_threshold_structure(x in vecs(), w in 1e-3f64..10.0) {
        let p = prox_linf(&x, w);
        let t = linf_norm(&p);
        prop_assert!(t <= linf_norm(&x) + 1e-15);
        for (a, b) in x.iter().zip(&p) {
            // entries below the threshold are untouched, the rest are clipped
            if a.abs() <= t {
                prop_assert_eq!(a, b);
            } else {
                prop_assert!((b.abs() - t).abs() < 1e-12 && a * b >= 0.0);
            }
        }
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        prop_assert_eq!(t == 0.0, l1 <= w);
    }

    #[test]
    fn in_place_agrees(x in vecs(), w in 1e-3f64..10.0) {
        let mut y = x.clone();
        let mut scratch = Vec::new();
        prox_linf_in_place(&mut y, w, &mut scratch);
        prop_assert_eq!(y, prox_linf(&x, w));
    }

    #[test]
    fn projection_lands_in_ball(x in vecs(), r in 0.01f64..30.0) {
        let p = project_l1_ball(&x, r);
        let l1: f64 = p.iter().map(|v| v.abs()).sum();
        prop_assert!(l1 <= r * (1.0 + 1e-12));
        let inside: f64 = x.iter().map(|v| v.abs()).sum();
        if inside <= r {
            prop_assert_eq!(p, x);
        }
    }
}

#[test]
fn threshold_reports_the_clip_level() {
    // magnitudes 3, 2, 1 and weight 2: clip at 1.5
    let t = linf_threshold(&[3.0, -2.0, 1.0], 2.0);
    let p = prox_linf(&[3.0, -2.0, 1.0], 2.0);
    assert!((t.phi - 1.5).abs() < 1e-15);
    assert_eq!(p, vec![1.5, -1.5, 1.0]);
}

#[test]
fn gradient_step_then_prox() {
    // H = I, σ² = 2, λ = 1, δ = 1: step to y/2 then clip with weight 1/2
    let problem = CodingProblem::new(DVector::from_vec(vec![4.0, 0.0]), DMatrix::identity(2, 2)).unwrap();
    let out = gradient_step_prox(&[0.0, 0.0], &problem, 2.0, 1.0, 1.0).unwrap();
    let manual = prox_linf(&[2.0, 0.0], 0.5);
    for (a, b) in out.iter().zip(&manual) {
        assert!((a - b).abs() < 1e-15);
    }
}
