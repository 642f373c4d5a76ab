use h2_core::theta::*;
use h2_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn residual_scale_probe() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut worst_rel = 0.0f64;
    for _ in 0..200 {
        let re: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.8..0.8)).collect();
        let im: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.25..0.25)).collect();
        let entries = vec![
            Complex64::new(re[0], 1.0 + im[0]), Complex64::new(re[2], im[2]),
            Complex64::new(re[2], im[2]), Complex64::new(re[1], 1.0 + im[1]),
        ];
        let sigma = SiegelPoint::new(2, entries).unwrap();
        // ||z|| <= 2 uniformly in the complex 2-vector ball-ish
        let mut z: Vec<Complex64> = (0..2).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let nrm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        let scale = rng.gen_range(0.0..2.0) / nrm.max(1e-9);
        z = z.into_iter().map(|c| c * scale).collect();
        let chr = ThetaCharacteristic::new(
            (0..2).map(|_| rng.gen_range(-2i64..=2)).collect(),
            (0..2).map(|_| rng.gen_range(-2i64..=2)).collect(),
        );
        let k = rng.gen_range(1..=2);
        let za = ThetaArgument::new(z.clone()).unwrap();
        let res = check_quasiperiodicity(&chr, &za, &sigma, k, 1e-12).unwrap();
        let base = theta_eval(&chr, &za, &sigma, 1e-12).unwrap().norm();
        for r in res {
            worst = worst.max(r);
            worst_rel = worst_rel.max(r / base.max(1.0));
        }
    }
    println!("worst absolute residual: {worst:e}");
    println!("worst value-normalized:  {worst_rel:e}");
}
