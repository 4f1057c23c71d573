use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use shifted_subset::distributions::pi_subset;
use shifted_subset::oracle::{build_instance, quantum_extract};
use shifted_subset::recovery::{recover_radius_odd_n, SampleBudget};
use shifted_subset::sampler::{
    fourier_sample, make_shifted_state, FourierSampler, RngState, SampleStream,
};
use shifted_subset::subset::SubsetSpec;

#[test]
fn extracted_states_sample_the_subset_law() {
    let spec = SubsetSpec::explicit(5, vec![0, 3, 6, 9, 13, 22, 27, 31]).unwrap();
    let law = pi_subset(&spec).unwrap();
    let inst = build_instance(&spec, 42).unwrap();
    let mut rng = RngState::new(42, 0);
    let mut counts = vec![0u64; 32];
    let draws = 20_000;
    // a fresh state per batch, as a quantum algorithm would prepare
    for _ in 0..draws / 100 {
        let ex = quantum_extract(&inst, &mut rng).unwrap();
        assert!(!ex.deficient);
        for _ in 0..100 {
            counts[fourier_sample(&ex.state, &mut rng) as usize] += 1;
        }
    }
    let mut stat = 0.0;
    let mut bins = 0;
    for z in 0..32u64 {
        let e = law.prob_f64(z) * draws as f64;
        if e == 0.0 {
            assert_eq!(counts[z as usize], 0, "impossible outcome {z}");
            continue;
        }
        stat += (counts[z as usize] as f64 - e).powi(2) / e;
        bins += 1;
    }
    let p = 1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn odd_sphere_recovered_from_shifted_states() {
    let n = 9;
    let mut rng = RngState::new(3, 0);
    for r in 0..=4 {
        let spec = SubsetSpec::sphere(n, r).unwrap();
        let shift = rng.random_range(0..1u64 << n);
        let sampler = FourierSampler::new(&make_shifted_state(&spec, shift).unwrap());
        let mut stream = SampleStream::new(&sampler, RngState::for_trial(4, r as u64));
        let res = recover_radius_odd_n(&mut stream, &SampleBudget::radius(n)).unwrap();
        assert_eq!(res.answer, r);
        assert_eq!(res.samples_used, 4 * 9u64.pow(4));
    }
}
