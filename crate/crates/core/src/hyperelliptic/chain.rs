//! Sheet bookkeeping and cycle quadrature.
//!
//! The square root of the curve polynomial is continued along paths by
//! comparison with a fixed single-valued reference branch whose cuts are
//! parallel rays, one per finite branch point. Along any path the continued
//! root equals (sign) * (reference value), and the sign flips exactly where
//! the path crosses a reference ray, so continuation reduces to exact
//! crossing counts instead of stepwise nearest-root selection.
//!
//! Cycles are lenses around the legs of an embedded chain through the finite
//! branch points in their given order: the loop around leg j encircles
//! branch points j and j+1, and its period is twice the leg integral. The
//! germ carried into each leg is fixed at the junction branch point by a
//! local crossing-orientation rule, which pins the relative orientations of
//! the loops to the standard chain configuration.

use super::geom::{plan_path, seg_cross_ray};
use super::HyperError;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Reference branch of sqrt(prod (z - lam_i)) with cuts along parallel rays.
pub struct GermField {
    pub lams: Vec<Complex64>,
    ray_dir: Complex64,
    theta0: f64,
}

impl GermField {
    pub fn new(lams: Vec<Complex64>) -> Self {
        // Ray direction must not be parallel to any inter-branch direction,
        // so that rays never overlap chain legs or cuts.
        let mut theta0 = 0.831_253_841_3_f64;
        'outer: for k in 0..128 {
            let cand = (0.831_253_841_3 + k as f64 * 0.763_932_022_5) % (2.0 * std::f64::consts::PI);
            let mut ok = true;
            for (i, a) in lams.iter().enumerate() {
                for b in lams.iter().take(i) {
                    let ang = (a - b).arg();
                    let mut d = (ang - cand) % std::f64::consts::PI;
                    if d < 0.0 {
                        d += std::f64::consts::PI;
                    }
                    let d = d.min(std::f64::consts::PI - d);
                    if d < 1e-3 {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                theta0 = cand;
                break 'outer;
            }
        }
        let ray_dir = Complex64::from_polar(1.0, theta0);
        GermField { lams, ray_dir, theta0 }
    }

    /// sqrt(z - lam) cut along the ray lam + t * ray_dir.
    fn sqrt_ray(&self, z: Complex64, lam: Complex64) -> Complex64 {
        let zeta = (z - lam) / self.ray_dir;
        let mut a = zeta.arg();
        if a <= 0.0 {
            a += 2.0 * std::f64::consts::PI;
        }
        Complex64::from_polar(zeta.norm().sqrt(), 0.5 * (a + self.theta0))
    }

    /// Reference value of the root at z.
    pub fn w_ref(&self, z: Complex64) -> Complex64 {
        self.lams.iter().map(|&l| self.sqrt_ray(z, l)).product()
    }

    /// Parity of reference-ray crossings along the open segment (a, b).
    pub fn crossing_sign(&self, a: Complex64, b: Complex64) -> f64 {
        let mut n = 0usize;
        for &l in &self.lams {
            if seg_cross_ray(a, b, l, self.ray_dir) {
                n += 1;
            }
        }
        if n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign accumulated along a polyline.
    fn walk_sign(&self, pts: &[Complex64]) -> f64 {
        pts.windows(2).map(|w| self.crossing_sign(w[0], w[1])).product()
    }
}

/// Embedded chain through the finite branch points with w-germ seeds per leg.
pub struct Chain {
    pub germ: GermField,
    pub legs: Vec<Vec<Complex64>>,
    pub seeds: Vec<f64>,
}

impl Chain {
    pub fn build(lams: &[Complex64], clearance: f64) -> Result<Chain, HyperError> {
        let mut legs: Vec<Vec<Complex64>> = Vec::new();
        for j in 0..lams.len() - 1 {
            let leg = plan_path(lams[j], lams[j + 1], lams, &legs, clearance).ok_or_else(|| {
                HyperError::PathPlanning(format!(
                    "no embedded chain leg from branch point {} to {}",
                    j + 1,
                    j + 2
                ))
            })?;
            legs.push(leg);
        }
        let germ = GermField::new(lams.to_vec());

        // Germ seed of each leg at its reference point (midpoint of the first
        // piece). Leg 1 seeds at +1. Each junction fixes the next seed by the
        // local crossing orientation: the germ d_in carried into the branch
        // point and the germ d_out leaving it must satisfy Im(conj(d_in) d_out) > 0.
        const EPS: f64 = 1e-6;
        let mut seeds = vec![1.0f64];
        for j in 1..legs.len() {
            let prev = &legs[j - 1];
            let cur = &legs[j];
            let q = cur[0];
            let p_in = q + (prev[prev.len() - 2] - q) * EPS;
            let prev_ref = 0.5 * (prev[0] + prev[1]);
            let mut walk = vec![prev_ref];
            walk.extend_from_slice(&prev[1..prev.len() - 1]);
            walk.push(p_in);
            let s_in = seeds[j - 1] * germ.walk_sign(&walk);
            let d_in = s_in * germ.w_ref(p_in);

            let p_out = q + (cur[1] - q) * EPS;
            let cur_ref = 0.5 * (cur[0] + cur[1]);
            let s_trial = germ.crossing_sign(cur_ref, p_out);
            let d_out = s_trial * germ.w_ref(p_out);
            let cross = (d_in.conj() * d_out).im;
            if cross == 0.0 {
                return Err(HyperError::PathPlanning(
                    "degenerate junction: chain legs meet tangentially".into(),
                ));
            }
            seeds.push(if cross > 0.0 { 1.0 } else { -1.0 });
        }
        Ok(Chain { germ, legs, seeds })
    }

    /// w at a point z on leg j, reached by walking the leg from its
    /// reference point through the listed junction points.
    fn w_at(&self, j: usize, walk: &[Complex64], z: Complex64) -> Complex64 {
        let mut s = self.seeds[j];
        let mut prev = 0.5 * (self.legs[j][0] + self.legs[j][1]);
        for &p in walk {
            s *= self.germ.crossing_sign(prev, p);
            prev = p;
        }
        s *= self.germ.crossing_sign(prev, z);
        s * self.germ.w_ref(z)
    }
}

pub(super) fn gauss_legendre(n: usize) -> std::sync::Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<(Vec<f64>, Vec<f64>)>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for i in 0..n {
        // Newton iteration on P_n from the standard initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    let arc = std::sync::Arc::new((nodes, weights));
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

fn cheb_nodes(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect()
}

/// One pass of the leg integral of z^p dz / w at a fixed node count.
fn leg_integral_n(chain: &Chain, j: usize, p: usize, n: usize) -> Complex64 {
    let leg = &chain.legs[j];
    let pieces = leg.len() - 1;
    let zp = |z: Complex64| z.powi(p as i32);

    if pieces == 1 {
        // both ends are branch points: pure Gauss-Chebyshev
        let a = leg[0];
        let b = leg[1];
        let r = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut total = Complex64::new(0.0, 0.0);
        for t in cheb_nodes(n) {
            let z = mid + r * t;
            let w = chain.w_at(j, &[], z);
            total += zp(z) * r * (1.0 - t * t).sqrt() / w;
        }
        return total * (std::f64::consts::PI / n as f64);
    }

    let gl = gauss_legendre(n);
    let (xs, ws) = (&gl.0, &gl.1);
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..pieces {
        let a = leg[i];
        let b = leg[i + 1];
        // junction points between the reference point and this piece
        let walk: Vec<Complex64> = leg[1..=i].to_vec();
        if i == 0 {
            // singular at a: z = a + (b - a) u^2
            for (&x, &wq) in xs.iter().zip(ws) {
                let u = 0.5 * (x + 1.0);
                let z = a + (b - a) * u * u;
                let w = chain.w_at(j, &[], z);
                total += 0.5 * wq * zp(z) * 2.0 * (b - a) * u / w;
            }
        } else if i == pieces - 1 {
            // singular at b: z = b + (a - b) u^2, traversed toward b
            for (&x, &wq) in xs.iter().zip(ws) {
                let u = 0.5 * (x + 1.0);
                let z = b + (a - b) * u * u;
                let w = chain.w_at(j, &walk, z);
                total -= 0.5 * wq * zp(z) * 2.0 * (a - b) * u / w;
            }
        } else {
            let r = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (&x, &wq) in xs.iter().zip(ws) {
                let z = mid + r * x;
                let w = chain.w_at(j, &walk, z);
                total += wq * zp(z) * r / w;
            }
        }
    }
    total
}

/// Period of the loop around chain leg j for the differential z^p dz / w:
/// twice the leg integral, with the node count doubled until two successive
/// evaluations agree within `tol`.
pub fn loop_period(chain: &Chain, j: usize, p: usize, tol: f64) -> Result<Complex64, HyperError> {
    let mut n = 24usize;
    let mut prev = leg_integral_n(chain, j, p, n);
    while n < 6200 {
        n *= 2;
        let cur = leg_integral_n(chain, j, p, n);
        if (cur - prev).norm() <= tol * cur.norm().max(1.0) {
            return Ok(2.0 * cur);
        }
        prev = cur;
    }
    Err(HyperError::QuadratureNoConvergence {
        what: format!("loop around branch points {} and {}", j + 1, j + 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_branch_squares_to_polynomial() {
        let gf = GermField::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.5, 0.7)]);
        for &z in &[c(0.3, 0.4), c(-1.0, 2.0), c(4.0, -0.5)] {
            let w = gf.w_ref(z);
            let f: Complex64 = gf.lams.iter().map(|&l| z - l).product();
            assert!((w * w - f).norm() < 1e-12 * f.norm().max(1.0));
        }
    }

    #[test]
    fn crossing_sign_consistent_with_reference_jump() {
        // walking across a ray flips the tracked sign exactly where w_ref jumps
        let gf = GermField::new(vec![c(0.0, 0.0), c(3.0, 0.0), c(5.0, 0.0)]);
        let dir = Complex64::from_polar(1.0, gf.theta0);
        let probe = c(0.0, 0.0) + dir * 0.7;
        let left = probe + Complex64::new(0.0, 1.0) * dir * 0.01;
        let right = probe - Complex64::new(0.0, 1.0) * dir * 0.01;
        let jump = (gf.w_ref(left) + gf.w_ref(right)).norm();
        let cont = (gf.w_ref(left) - gf.w_ref(right)).norm();
        assert!(jump < cont, "reference branch must flip sign across its ray");
        assert_eq!(gf.crossing_sign(left, right), -1.0);
    }

    #[test]
    fn chain_builds_straight_for_collinear_points() {
        let lams = vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.5, 0.0)];
        let chain = Chain::build(&lams, 0.07).unwrap();
        assert_eq!(chain.legs.len(), 4);
        for leg in &chain.legs {
            assert_eq!(leg.len(), 2, "collinear chain needs no detours");
        }
        assert_eq!(chain.seeds, vec![1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn quadrature_converges_on_lemniscatic_segment() {
        // int_0^1 dz / sqrt(z(z-1)(z+1)) has modulus sqrt(2) K(1/sqrt(2))
        let lams = vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        let chain = Chain::build(&lams, 0.07).unwrap();
        let period = loop_period(&chain, 0, 0, 1e-12).unwrap();
        let expected_modulus = 2.0 * 2.622_057_554_292_119_8;
        assert!((period.norm() - expected_modulus).abs() < 1e-9);
    }
}
