//! First-order theta functions with integer characteristics on the Siegel
//! upper half space, at any genus (exercised here at g = 1, 2).
//!
//! The evaluator truncates the lattice sum to a box around the Gaussian
//! center and certifies the discarded tail against the requested tolerance;
//! an uncertifiable tail (nearly singular imaginary part) is a distinct
//! error. Summation order is fixed, so results are bit-reproducible.

use num_complex::Complex64;
use thiserror::Error;

pub const TOL_FLOOR: f64 = 1e-14;
const MAX_RADIUS: i64 = 200;

#[derive(Debug, Error, PartialEq)]
pub enum ThetaError {
    #[error("matrix must be square g x g with g >= 1")]
    NotSquare,
    #[error("matrix is not symmetric: max defect {0:e} exceeds 1e-12")]
    NotSymmetric(f64),
    #[error("imaginary part is not positive definite")]
    ImNotPositiveDefinite,
    #[error("tolerance {0:e} below the floor 1e-14")]
    TolBelowFloor(f64),
    #[error("dimension mismatch between characteristic, argument, and matrix")]
    DimMismatch,
    #[error("cannot certify truncation tail below {tol:e}: {why}")]
    TailBound { tol: f64, why: String },
    #[error("index {0} out of range 1..={1}")]
    BadIndex(usize, usize),
}

/// Point of the Siegel upper half space: complex symmetric matrix with
/// positive-definite imaginary part (validated on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    g: usize,
    entries: Vec<Complex64>, // row-major g x g
}

impl SiegelPoint {
    pub fn new(g: usize, entries: Vec<Complex64>) -> Result<Self, ThetaError> {
        if g == 0 || entries.len() != g * g {
            return Err(ThetaError::NotSquare);
        }
        let mut defect = 0.0f64;
        for i in 0..g {
            for j in 0..g {
                defect = defect.max((entries[i * g + j] - entries[j * g + i]).norm());
            }
        }
        if defect > 1e-12 {
            return Err(ThetaError::NotSymmetric(defect));
        }
        let im: Vec<f64> = entries.iter().map(|c| c.im).collect();
        if cholesky(g, &im).is_none() {
            return Err(ThetaError::ImNotPositiveDefinite);
        }
        Ok(SiegelPoint { g, entries })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.g + j]
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.g).map(|i| self.entry(i, k)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.g).map(|i| (0..self.g).map(|j| self.entry(i, j)).collect()).collect()
    }

    fn im_matrix(&self) -> Vec<f64> {
        self.entries.iter().map(|c| c.im).collect()
    }
}

/// Pair of integer vectors (eps, eps') labelling a first-order theta function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCharacteristic {
    pub eps: Vec<i64>,
    pub eps_prime: Vec<i64>,
}

impl ThetaCharacteristic {
    pub fn new(eps: Vec<i64>, eps_prime: Vec<i64>) -> Self {
        ThetaCharacteristic { eps, eps_prime }
    }

    pub fn genus(&self) -> usize {
        self.eps.len()
    }

    /// Parity of t(eps) . eps'; odd characteristics vanish at z = 0.
    pub fn is_odd(&self) -> bool {
        let dot: i64 = self.eps.iter().zip(&self.eps_prime).map(|(a, b)| a * b).sum();
        dot.rem_euclid(2) == 1
    }
}

/// Argument vector z in C^g with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaArgument(pub Vec<Complex64>);

impl ThetaArgument {
    pub fn new(z: Vec<Complex64>) -> Result<Self, ThetaError> {
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(ThetaError::DimMismatch);
        }
        Ok(ThetaArgument(z))
    }

    pub fn zero(g: usize) -> Self {
        ThetaArgument(vec![Complex64::new(0.0, 0.0); g])
    }
}

/// Cholesky factor of a symmetric positive definite matrix; None if not SPD.
fn cholesky(g: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0f64; g * g];
    for i in 0..g {
        for j in 0..=i {
            let mut s = a[i * g + j];
            for k in 0..j {
                s -= l[i * g + k] * l[j * g + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * g + i] = s.sqrt();
            } else {
                l[i * g + j] = s / l[j * g + j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(g: usize, l: &[f64], b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; g];
    for i in 0..g {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * g + k] * y[k];
        }
        y[i] = s / l[i * g + i];
    }
    let mut x = vec![0.0; g];
    for i in (0..g).rev() {
        let mut s = y[i];
        for k in i + 1..g {
            s -= l[k * g + i] * x[k];
        }
        x[i] = s / l[i * g + i];
    }
    x
}

/// Smallest eigenvalue of a small symmetric matrix (Jacobi rotations).
fn min_eigenvalue(g: usize, a: &[f64]) -> f64 {
    if g == 1 {
        return a[0];
    }
    let mut m = a.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..g {
            for j in i + 1..g {
                off += m[i * g + j] * m[i * g + j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..g {
            for q in p + 1..g {
                let apq = m[p * g + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * g + q] - m[p * g + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..g {
                    let mpk = m[p * g + k];
                    let mqk = m[q * g + k];
                    m[p * g + k] = c * mpk - s * mqk;
                    m[q * g + k] = s * mpk + c * mqk;
                }
                for k in 0..g {
                    let mkp = m[k * g + p];
                    let mkq = m[k * g + q];
                    m[k * g + p] = c * mkp - s * mkq;
                    m[k * g + q] = s * mkp + c * mkq;
                }
            }
        }
    }
    (0..g).map(|i| m[i * g + i]).fold(f64::INFINITY, f64::min)
}

/// Evaluate theta[eps; eps'](z, sigma) with the discarded tail certified
/// below `tol` in absolute value.
pub fn theta_eval(
    chr: &ThetaCharacteristic,
    z: &ThetaArgument,
    sigma: &SiegelPoint,
    tol: f64,
) -> Result<Complex64, ThetaError> {
    if tol < TOL_FLOOR {
        return Err(ThetaError::TolBelowFloor(tol));
    }
    let g = sigma.genus();
    if chr.genus() != g || chr.eps_prime.len() != g || z.0.len() != g {
        return Err(ThetaError::DimMismatch);
    }
    let y_mat = sigma.im_matrix();
    let l = cholesky(g, &y_mat).ok_or(ThetaError::ImNotPositiveDefinite)?;
    let y_im: Vec<f64> = z.0.iter().map(|c| c.im).collect();
    let u = cholesky_solve(g, &l, &y_im); // Y^-1 Im z
    let lambda_min = min_eigenvalue(g, &y_mat);
    // |term| = exp(pi yT Y^-1 y) * exp(-pi vT Y v), v = N + eps/2 + Y^-1 Im z
    let prefactor_exp = std::f64::consts::PI * y_im.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
    if prefactor_exp > 700.0 {
        return Err(ThetaError::TailBound {
            tol,
            why: format!("argument too large: log prefactor {prefactor_exp:.1}"),
        });
    }
    let prefactor = prefactor_exp.exp();
    let mut radius = None;
    for r in 1..=MAX_RADIUS {
        let count = (2.0 * r as f64 + 3.0).powi(g as i32);
        let tail = prefactor
            * count
            * (-std::f64::consts::PI * lambda_min * ((r - 1) as f64) * ((r - 1) as f64)).exp();
        if tail < tol {
            radius = Some(r);
            break;
        }
    }
    let radius = radius.ok_or_else(|| ThetaError::TailBound {
        tol,
        why: format!("smallest eigenvalue of Im(sigma) is {lambda_min:e}"),
    })?;

    // box centered at -eps/2 - Y^-1 Im z
    let lo_hi: Vec<(i64, i64)> = (0..g)
        .map(|i| {
            let c = -chr.eps[i] as f64 / 2.0 - u[i];
            let f = c.floor() as i64;
            (f - radius, f + radius + 1)
        })
        .collect();

    let half_eps: Vec<f64> = chr.eps.iter().map(|&e| e as f64 / 2.0).collect();
    let shifted: Vec<Complex64> = z
        .0
        .iter()
        .zip(&chr.eps_prime)
        .map(|(zi, &ep)| zi + Complex64::new(ep as f64 / 2.0, 0.0))
        .collect();

    let mut total = Complex64::new(0.0, 0.0);
    let mut n: Vec<i64> = lo_hi.iter().map(|&(lo, _)| lo).collect();
    'outer: loop {
        // v = n + eps/2
        let v: Vec<f64> = n.iter().zip(&half_eps).map(|(&ni, &he)| ni as f64 + he).collect();
        // E = 1/2 vT sigma v + vT (z + eps'/2)
        let mut e = Complex64::new(0.0, 0.0);
        for i in 0..g {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..g {
                row += sigma.entry(i, j) * v[j];
            }
            e += 0.5 * v[i] * row;
            e += v[i] * shifted[i];
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let mag = (-two_pi * e.im).exp();
        let phase = two_pi * e.re;
        total += Complex64::new(mag * phase.cos(), mag * phase.sin());

        // lexicographic odometer, last coordinate fastest
        for i in (0..g).rev() {
            n[i] += 1;
            if n[i] <= lo_hi[i].1 {
                continue 'outer;
            }
            n[i] = lo_hi[i].0;
        }
        break;
    }
    Ok(total)
}

/// Residuals |LHS - RHS| for the four transformation laws, with both sides
/// evaluated independently: (i) z -> z + e_k, (ii) z -> z + sigma_k,
/// (iii) z -> -z, (iv) characteristic shift by 2 e_k in both rows.
/// `k` is 1-based.
pub fn check_quasiperiodicity(
    chr: &ThetaCharacteristic,
    z: &ThetaArgument,
    sigma: &SiegelPoint,
    k: usize,
    tol: f64,
) -> Result<[f64; 4], ThetaError> {
    let g = sigma.genus();
    if k == 0 || k > g {
        return Err(ThetaError::BadIndex(k, g));
    }
    let ki = k - 1;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let base = theta_eval(chr, z, sigma, tol)?;

    // (i) theta(z + e_k) = exp(2 pi i eps_k / 2) theta(z)
    let mut z1 = z.0.clone();
    z1[ki] += 1.0;
    let lhs1 = theta_eval(chr, &ThetaArgument(z1), sigma, tol)?;
    let rhs1 = (two_pi_i * (chr.eps[ki] as f64 / 2.0)).exp() * base;

    // (ii) theta(z + sigma_k) = exp(2 pi i (-z_k - sigma_kk/2 - eps'_k/2)) theta(z)
    let mut z2 = z.0.clone();
    for i in 0..g {
        z2[i] += sigma.entry(i, ki);
    }
    let lhs2 = theta_eval(chr, &ThetaArgument(z2), sigma, tol)?;
    let factor2 = (two_pi_i
        * (-z.0[ki] - sigma.entry(ki, ki) / 2.0 - Complex64::new(chr.eps_prime[ki] as f64 / 2.0, 0.0)))
    .exp();
    let rhs2 = factor2 * base;

    // (iii) theta(-z) = exp(2 pi i t(eps) eps' / 2) theta(z)
    let zneg: Vec<Complex64> = z.0.iter().map(|c| -c).collect();
    let lhs3 = theta_eval(chr, &ThetaArgument(zneg), sigma, tol)?;
    let dot: i64 = chr.eps.iter().zip(&chr.eps_prime).map(|(a, b)| a * b).sum();
    let rhs3 = (two_pi_i * (dot as f64 / 2.0)).exp() * base;

    // (iv) theta[eps + 2 nu; eps' + 2 nu'](z) = exp(2 pi i t(eps) nu' / 2) theta(z),
    //      with nu = nu' = e_k
    let mut eps4 = chr.eps.clone();
    let mut epsp4 = chr.eps_prime.clone();
    eps4[ki] += 2;
    epsp4[ki] += 2;
    let lhs4 = theta_eval(&ThetaCharacteristic::new(eps4, epsp4), z, sigma, tol)?;
    let rhs4 = (two_pi_i * (chr.eps[ki] as f64 / 2.0)).exp() * base;

    Ok([
        (lhs1 - rhs1).norm(),
        (lhs2 - rhs2).norm(),
        (lhs3 - rhs3).norm(),
        (lhs4 - rhs4).norm(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn i_id2() -> SiegelPoint {
        SiegelPoint::new(2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap()
    }

    /// Plain 1-D theta sum, independent of the boxed evaluator.
    fn theta_1d(eps: i64, epsp: i64, z: Complex64, tau: Complex64) -> Complex64 {
        let mut total = c(0.0, 0.0);
        for n in -40..=40 {
            let v = n as f64 + eps as f64 / 2.0;
            let e = 0.5 * v * v * tau + v * (z + epsp as f64 / 2.0);
            let arg = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * e;
            total += arg.exp();
        }
        total
    }

    #[test]
    fn value_at_origin_matches_1d_square() {
        let chr = ThetaCharacteristic::new(vec![0, 0], vec![0, 0]);
        let got = theta_eval(&chr, &ThetaArgument::zero(2), &i_id2(), 1e-13).unwrap();
        let one_d = theta_1d(0, 0, c(0.0, 0.0), c(0.0, 1.0));
        assert!((got - one_d * one_d).norm() < 1e-12);
        assert!((got.re - 1.1803406).abs() < 1e-6);
        assert!(got.im.abs() < 1e-13);
    }

    #[test]
    fn odd_characteristic_vanishes_at_origin() {
        let chr = ThetaCharacteristic::new(vec![1, 0], vec![1, 0]);
        assert!(chr.is_odd());
        let sig = SiegelPoint::new(
            2,
            vec![c(0.3, 1.1), c(0.1, 0.2), c(0.1, 0.2), c(-0.2, 0.9)],
        )
        .unwrap();
        let got = theta_eval(&chr, &ThetaArgument::zero(2), &sig, 1e-13).unwrap();
        assert!(got.norm() < 1e-12);
    }

    #[test]
    fn diagonal_sigma_factorises() {
        let chr = ThetaCharacteristic::new(vec![0, 0], vec![0, 0]);
        let z = ThetaArgument(vec![c(0.3, 0.1), c(-0.2, 0.25)]);
        let got = theta_eval(&chr, &z, &i_id2(), 1e-13).unwrap();
        let want = theta_1d(0, 0, z.0[0], c(0.0, 1.0)) * theta_1d(0, 0, z.0[1], c(0.0, 1.0));
        assert!((got - want).norm() < 1e-11);
    }

    #[test]
    fn quasiperiodicity_residuals_small() {
        let chr = ThetaCharacteristic::new(vec![1, 0], vec![0, 1]);
        let sig = SiegelPoint::new(
            2,
            vec![c(0.4, 1.3), c(-0.2, 0.45), c(-0.2, 0.45), c(0.1, 1.0)],
        )
        .unwrap();
        let z = ThetaArgument(vec![c(0.2, -0.3), c(-0.1, 0.4)]);
        for k in 1..=2 {
            let res = check_quasiperiodicity(&chr, &z, &sig, k, 1e-12).unwrap();
            for r in res {
                assert!(r < 1e-10, "residual {r:e}");
            }
        }
    }

    #[test]
    fn characteristic_shift_is_exact_for_zero_shift() {
        // law (iv) with nu = nu' = 0 is the identity; compare a matrix with
        // itself evaluated twice to pin determinism as well
        let chr = ThetaCharacteristic::new(vec![1, 1], vec![0, 1]);
        let z = ThetaArgument(vec![c(0.05, 0.02), c(0.0, -0.07)]);
        let a = theta_eval(&chr, &z, &i_id2(), 1e-12).unwrap();
        let b = theta_eval(&chr, &z, &i_id2(), 1e-12).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        let chr = ThetaCharacteristic::new(vec![0, 0], vec![0, 0]);
        assert_eq!(
            theta_eval(&chr, &ThetaArgument::zero(2), &i_id2(), 1e-15),
            Err(ThetaError::TolBelowFloor(1e-15))
        );
        let chr1 = ThetaCharacteristic::new(vec![0], vec![0]);
        assert_eq!(
            theta_eval(&chr1, &ThetaArgument::zero(2), &i_id2(), 1e-12),
            Err(ThetaError::DimMismatch)
        );
        assert!(SiegelPoint::new(2, vec![c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
            .is_err());
        assert_eq!(
            SiegelPoint::new(2, vec![c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
            Err(ThetaError::ImNotPositiveDefinite)
        );
        // nearly singular imaginary part: tail cannot be certified
        let thin = SiegelPoint::new(1, vec![c(0.0, 1e-9)]).unwrap();
        let chr1 = ThetaCharacteristic::new(vec![0], vec![0]);
        match theta_eval(&chr1, &ThetaArgument::zero(1), &thin, 1e-12) {
            Err(ThetaError::TailBound { .. }) => {}
            other => panic!("expected TailBound, got {other:?}"),
        }
    }

    #[test]
    fn exactly_six_odd_genus2_characteristics() {
        let mut odd = 0;
        for bits in 0..16u32 {
            let chr = ThetaCharacteristic::new(
                vec![(bits & 1) as i64, ((bits >> 1) & 1) as i64],
                vec![((bits >> 2) & 1) as i64, ((bits >> 3) & 1) as i64],
            );
            if chr.is_odd() {
                odd += 1;
            }
        }
        assert_eq!(odd, 6);
    }
}
