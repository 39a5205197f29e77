//! Dense <-> MPS conversion: bond ranks, round trips and contraction values.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use squeezelab_mps::{tensor_to_mps, MPSState};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_abs(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn product_tensor_decomposes_with_unit_bonds() {
    // |psi> = v0 x v1 x v2, sites of different dimension
    let v0 = [c(0.6, 0.0), c(0.0, 0.8)];
    let v1 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let v2 = [c(0.0, 0.0), c(1.0, 0.0)];
    let mut data = Vec::new();
    for a in &v0 {
        for b in &v1 {
            for d in &v2 {
                data.push(a * b * d);
            }
        }
    }
    let mps = tensor_to_mps(&data, &[2, 3, 2], 16, 0.0).unwrap();
    assert_eq!(mps.bond_dims(), vec![1, 1]);
    assert!(max_abs(&mps.contract_dense().unwrap(), &data) <= 1e-12);
}

#[test]
fn ghz_tensor_has_bond_dimension_two() {
    let n = 4;
    let mut data = vec![c(0.0, 0.0); 1 << n];
    let amp = c(1.0 / 2f64.sqrt(), 0.0);
    data[0] = amp;
    data[(1 << n) - 1] = amp;
    let mps = tensor_to_mps(&data, &[2; 4], 16, 0.0).unwrap();
    assert_eq!(mps.bond_dims(), vec![2, 2, 2]);
    assert!(max_abs(&mps.contract_dense().unwrap(), &data) <= 1e-12);
}

#[test]
fn random_tensor_round_trips_exactly_without_truncation() {
    let mut rng = squeezelab_testkit::rng(41);
    let dims = [2usize, 3, 2, 2, 3];
    let total: usize = dims.iter().product();
    let mut data: Vec<C64> =
        (0..total).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm: f64 = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut data {
        *z /= norm;
    }
    let mps = tensor_to_mps(&data, &dims, 64, 0.0).unwrap();
    assert!(mps.discarded <= 1e-24);
    assert!(max_abs(&mps.contract_dense().unwrap(), &data) <= 1e-12);
    assert!((mps.norm_sqr() - 1.0).abs() <= 1e-12);
}

#[test]
fn truncation_error_respects_the_threshold() {
    let mut rng = squeezelab_testkit::rng(7);
    let dims = [4usize, 4, 4, 4];
    let total: usize = dims.iter().product();
    let mut data: Vec<C64> =
        (0..total).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm: f64 = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut data {
        *z /= norm;
    }
    let eps = 1e-3;
    let mps = tensor_to_mps(&data, &dims, 64, eps).unwrap();
    let back = mps.contract_dense().unwrap();
    let err: f64 =
        data.iter().zip(&back).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    // one cut per internal bond, each within the relative budget
    assert!(err <= eps * (dims.len() - 1) as f64 + 1e-12, "recontraction error {err:.3e}");
    assert!((mps.norm_sqr() - (1.0 - mps.discarded)).abs() <= 1e-12);
}

#[test]
fn expectation_values_on_simple_states() {
    let vac = Array1::from(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let one = Array1::from(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let mps = MPSState::product(&[vac, one.clone(), one]).unwrap();
    let mut n_op = Array2::zeros((3, 3));
    for k in 0..3 {
        n_op[(k, k)] = c(k as f64, 0.0);
    }
    assert!((mps.norm_sqr() - 1.0).abs() <= 1e-14);
    assert!(mps.expectation(&[(0, &n_op)]).unwrap().norm() <= 1e-14);
    assert!((mps.expectation(&[(1, &n_op)]).unwrap().re - 1.0).abs() <= 1e-14);
    assert!((mps.expectation(&[(1, &n_op), (2, &n_op)]).unwrap().re - 1.0).abs() <= 1e-14);
    assert!(mps.expectation(&[(3, &n_op)]).is_err());
    let wrong = Array2::<C64>::zeros((2, 2));
    assert!(mps.expectation(&[(0, &wrong)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // any random 4-site state survives the dense -> MPS -> dense round trip
    #[test]
    fn round_trip_is_exact_for_random_states(seed in 0u64..1_000_000) {
        let mut rng = squeezelab_testkit::rng(seed);
        let dims = [3usize, 2, 3, 2];
        let total: usize = dims.iter().product();
        let data: Vec<C64> = (0..total)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let mps = tensor_to_mps(&data, &dims, 64, 0.0).unwrap();
        prop_assert!(max_abs(&mps.contract_dense().unwrap(), &data) <= 1e-12);
    }
}
