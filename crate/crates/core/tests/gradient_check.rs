mod common;

use aquanode::nn::{backward, forward};
use common::{check_gradients, gradient_triple, naive_forward};

#[test]
fn analytic_gradients_match_central_differences() {
    let mut worst: f64 = 0.0;
    for seed in 0..24 {
        let (model, x, label) = gradient_triple(seed);
        let r = check_gradients(&model, &x, label);
        assert_eq!(r.components, model.param_count());
        assert!(
            r.worst_rel_err < 1e-4,
            "seed {seed}: rel err {:e} at tensor {} index {}",
            r.worst_rel_err,
            r.worst_at.0,
            r.worst_at.1
        );
        worst = worst.max(r.worst_rel_err);
    }
    eprintln!("worst relative error {worst:e}");
}

#[test]
fn forward_matches_layer_by_layer_oracle() {
    for seed in 100..110 {
        let (model, x, _) = gradient_triple(seed);
        let got = forward(&model, &x).unwrap().probabilities;
        for (a, b) in got.iter().zip(naive_forward(&model, &x)) {
            assert!((a - b).abs() < 1e-12);
        }
        let f32_model = model.cast::<f32>();
        let low = forward(&f32_model, &x).unwrap().probabilities;
        for (a, b) in low.iter().zip(&got) {
            assert!((a - b).abs() < 1e-4);
        }
    }
}

#[test]
fn loss_reported_by_backward_matches_forward() {
    let (model, x, label) = gradient_triple(7);
    let g = backward(&model, &x, label).unwrap();
    let p = forward(&model, &x).unwrap().probabilities[label];
    assert!((g.loss + p.ln()).abs() < 1e-12);
}
