use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use qudit_discriminator::harness::{haar_state, random_unitary};
use qudit_discriminator::jordan::build_gh_bases;
use qudit_discriminator::linalg::{self, re, CMatrix, C64};
use qudit_discriminator::optics::*;
use qudit_discriminator::povm::{omega1_from_x, subspace_povm};
use qudit_discriminator::spaces::{SpaceSpec, StateVector};
use qudit_discriminator::Error;

const EPS: f64 = 1e-12;

fn embed2(b: nalgebra::Matrix2<C64>) -> CMatrix {
    CMatrix::from_fn(2, 2, |r, c| b[(r, c)])
}

#[test]
fn elementary_blocks() {
    let u = two_mode_unitary(FRAC_PI_2, 0.0, 0.0);
    assert!((embed2(u) - CMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])).norm() < EPS);
    let swap = two_mode_unitary(0.0, 0.0, 0.0);
    assert!((embed2(swap) - CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])).norm() < EPS);
    let b = beamsplitter(FRAC_PI_4);
    assert!(b.iter().all(|x| (x.abs() - FRAC_1_SQRT_2).abs() < EPS));
    for w in [0.1, 0.9, 1.4] {
        let d = two_mode_unitary(w, 0.0, 0.0) - beamsplitter(w).map(re);
        assert!(d.iter().all(|z| z.norm() < EPS));
    }
}

#[test]
fn discriminator_matches_block_povm() {
    let set = build_gh_bases(3).unwrap();
    let (g, h) = (&set.g[3], &set.h[3]);
    for k in 0..20 {
        let w = FRAC_PI_2 * k as f64 / 19.0;
        let net = discriminator_network(w).unwrap();
        assert!(net.interferometer.unitarity_defect() < EPS);
        let povm = subspace_povm(g, h, w).unwrap();
        let pg = net.probabilities(&DiscriminatorNetwork::input_g()).unwrap();
        let ph = net.probabilities(&DiscriminatorNetwork::input_h()).unwrap();
        let qg = povm.probabilities(g).unwrap();
        let qh = povm.probabilities(h).unwrap();
        for i in 0..3 {
            assert!((pg[i] - qg[i]).abs() < EPS);
            assert!((ph[i] - qh[i]).abs() < EPS);
        }
        assert!(ph[D1_OUTPUT] < EPS);
    }
    let net = discriminator_network(omega1_from_x(2.0).unwrap()).unwrap();
    let fg = net.probabilities(&DiscriminatorNetwork::input_g()).unwrap()[FAIL_OUTPUT];
    let fh = net.probabilities(&DiscriminatorNetwork::input_h()).unwrap()[FAIL_OUTPUT];
    assert!((fg - 0.5).abs() < EPS && (fh - 0.5).abs() < EPS);
    assert!(discriminator_network(-0.5).is_err());
}

#[test]
fn reck_examples() {
    let net = reck_decompose(&CMatrix::identity(5, 5)).unwrap();
    assert!(net.layers().is_empty());
    assert!(net.phases().iter().all(|&p| p == 0.0));

    let u = embed2(two_mode_unitary(0.7, 1.3, -0.4));
    let net = reck_decompose(&u).unwrap();
    assert_eq!(net.layers().len(), 1);
    assert!(linalg::max_abs_diff(&net.unitary(), &u) < EPS);

    let u = random_unitary(4, 42).unwrap();
    let net = reck_decompose(&u).unwrap();
    assert!(net.layers().len() <= 6);
    assert!(linalg::max_abs_diff(&net.unitary(), &u) < 1e-10);

    let bad = CMatrix::from_element(3, 3, re(0.5));
    assert!(matches!(reck_decompose(&bad), Err(Error::Contract(_))));
}

#[test]
fn state_preparation() {
    let net = prepare_state_network(&[re(1.0), re(0.0), re(0.0), re(0.0)]).unwrap();
    assert!(net.layers().is_empty());

    let net = prepare_state_network(&[re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)]).unwrap();
    assert_eq!(net.layers().len(), 1);
    let col = net.unitary().column(0).into_owned();
    assert!((col[0] - FRAC_1_SQRT_2).norm() < 1e-10 && (col[1] - FRAC_1_SQRT_2).norm() < 1e-10);

    let psi = haar_state(5, 7).unwrap();
    let net = prepare_state_network(psi.amplitudes().as_slice()).unwrap();
    let col = net.unitary().column(0).into_owned();
    assert!((col - psi.amplitudes()).norm() < 1e-10);

    assert!(matches!(prepare_state_network(&[re(0.5), re(0.5)]), Err(Error::Contract(_))));
}

#[test]
fn click_statistics() {
    let sp2 = SpaceSpec::single(2).unwrap();
    let shots = 100_000;

    let id = Interferometer::new(2).unwrap();
    let mode1 = StateVector::basis(sp2, &[1]).unwrap();
    assert_eq!(simulate_clicks(&id, &mode1, 1000, 0).unwrap().counts, vec![1000, 0]);

    let mut bs = Interferometer::new(2).unwrap();
    bs.push(TwoModeLayer::new(0, 1, FRAC_PI_4, 0.0, 0.0).unwrap()).unwrap();
    let stats = simulate_clicks(&bs, &mode1, shots, 3).unwrap();
    let sigma = (0.25 / shots as f64).sqrt();
    for f in stats.frequencies() {
        assert!((f - 0.5).abs() < 5.0 * sigma);
    }
    assert!(stats.total_variation(&[0.5, 0.5]) < 5.0 * (2.0 / shots as f64).sqrt());

    let net = discriminator_network(omega1_from_x(2.0).unwrap()).unwrap();
    let g = StateVector::new(SpaceSpec::single(3).unwrap(), DiscriminatorNetwork::input_g()).unwrap();
    let stats = simulate_clicks(&net.interferometer, &g, shots, 4).unwrap();
    assert!((stats.frequencies()[D1_OUTPUT] - 0.5).abs() < 5.0 * sigma);
    assert_eq!(stats.counts[D2_OUTPUT], 0);
    assert_eq!(stats, simulate_clicks(&net.interferometer, &g, shots, 4).unwrap());

    let exact = net.probabilities(&DiscriminatorNetwork::input_g()).unwrap();
    assert!(stats.total_variation(&exact) < 5.0 * (3.0 / shots as f64).sqrt());

    assert!(matches!(simulate_clicks(&bs, &g, 10, 0), Err(Error::Contract(_))));
}

#[test]
fn text_format() {
    let net = reck_decompose(&random_unitary(4, 8).unwrap()).unwrap();
    let text = net.to_text();
    assert!(text.starts_with("MODES 4\n"));
    let first_phase = text.find("PHASE").unwrap_or(text.len());
    assert!(text[..first_phase].lines().skip(1).all(|l| l.starts_with("BS ")));
    let back = Interferometer::from_text(&text).unwrap();
    assert_eq!(back, net);

    let prep = prepare_state_network(&[re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)]).unwrap();
    assert_eq!(prep.to_text().lines().filter(|l| l.starts_with("BS")).count(), 1);
    assert!(matches!(Interferometer::from_text("MODES 2\nBS 1 2 x 0 0\n"), Err(Error::Parse { line: 2, .. })));
}
