use h2_core::hyperelliptic::*;
use h2_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }

#[test]
fn g2_round_trip_smoke() {
    for (l3, l4, l5) in [
        (c(2.0,0.0), c(3.0,0.0), c(4.5,0.0)),
        (c(2.0,0.8), c(4.0,-0.5), c(-1.5,2.0)),
        (c(0.3,1.9), c(2.6,0.0), c(4.0,1.0)),
    ] {
        let cfg = BranchConfig::from_free(2, &[l3, l4, l5]).unwrap();
        let pd = period_matrix(&cfg, 1e-10).unwrap();
        let rec = recover_all(&pd, 1e-8).unwrap();
        let fin = rec.finite_lambdas();
        let e3 = (fin[2]-l3).norm(); let e4 = (fin[3]-l4).norm(); let e5 = (fin[4]-l5).norm();
        println!("errs: {e3:.2e} {e4:.2e} {e5:.2e}");
        assert!(e3 < 1e-6 && e4 < 1e-6 && e5 < 1e-6, "{e3} {e4} {e5}");
    }
}
