//! Plane geometry for contour construction: crossing predicates and a small
//! visibility-graph router used to keep integration paths away from branch
//! points and previously placed legs.

use num_complex::Complex64;

/// Strict interior crossing of open segments (a,b) and (c,d).
pub fn seg_cross_seg(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let e = b - a;
    let f = d - c;
    let det = e.re * (-f.im) - (-f.re) * e.im;
    if det.abs() < 1e-300 {
        return false;
    }
    let r = c - a;
    let u = (r.re * (-f.im) - (-f.re) * r.im) / det;
    let t = (e.re * r.im - e.im * r.re) / det;
    u > 0.0 && u < 1.0 && t > 0.0 && t < 1.0
}

/// Strict crossing of the open segment (a,b) with the open ray origin + t*dir, t > 0.
pub fn seg_cross_ray(a: Complex64, b: Complex64, origin: Complex64, dir: Complex64) -> bool {
    let e = b - a;
    let det = e.re * (-dir.im) - (-dir.re) * e.im;
    if det.abs() < 1e-300 {
        return false;
    }
    let r = origin - a;
    let u = (r.re * (-dir.im) - (-dir.re) * r.im) / det;
    let t = (e.re * r.im - e.im * r.re) / det;
    u > 0.0 && u < 1.0 && t > 0.0
}

/// Distance from point p to the closed segment [a,b].
pub fn seg_point_dist(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let e = b - a;
    let len2 = e.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a).re * e.re + (p - a).im * e.im) / len2).clamp(0.0, 1.0);
    (a + e * t - p).norm()
}

/// Distance between closed segments [a,b] and [c,d]; zero if they cross.
pub fn seg_seg_dist(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    if seg_cross_seg(a, b, c, d) {
        return 0.0;
    }
    seg_point_dist(a, b, c)
        .min(seg_point_dist(a, b, d))
        .min(seg_point_dist(c, d, a))
        .min(seg_point_dist(c, d, b))
}

/// Polyline from `start` to `goal` that keeps `clearance` away from every
/// point of `avoid` (other than its own endpoints) and does not cross or
/// nearly touch any polyline in `obstacles`. Deterministic shortest path on
/// a small visibility graph; straight connection preferred when free.
pub fn plan_path(
    start: Complex64,
    goal: Complex64,
    avoid: &[Complex64],
    obstacles: &[Vec<Complex64>],
    clearance: f64,
) -> Option<Vec<Complex64>> {
    let blocked = |a: Complex64, b: Complex64| -> bool {
        for &p in avoid {
            if (p - a).norm() < 1e-12 || (p - b).norm() < 1e-12 {
                continue;
            }
            if seg_point_dist(a, b, p) < clearance {
                return true;
            }
        }
        for poly in obstacles {
            for w in poly.windows(2) {
                if seg_cross_seg(a, b, w[0], w[1]) {
                    return true;
                }
                // keep away from obstacle interiors except at shared endpoints
                let shares = |p: Complex64| (p - a).norm() < 1e-12 || (p - b).norm() < 1e-12;
                if !shares(w[0]) && !shares(w[1]) && seg_seg_dist(a, b, w[0], w[1]) < 0.3 * clearance
                {
                    return true;
                }
            }
        }
        false
    };

    if !blocked(start, goal) {
        return Some(vec![start, goal]);
    }

    let mut nodes = vec![start, goal];
    for &p in avoid {
        for k in 0..16 {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / 16.0;
            nodes.push(p + Complex64::from_polar(2.2 * clearance, ang));
        }
    }
    let centroid = avoid.iter().sum::<Complex64>() / avoid.len() as f64;
    let radius = 2.0 + 1.6 * avoid.iter().map(|p| (p - centroid).norm()).fold(0.0, f64::max);
    for k in 0..24 {
        let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.15) / 24.0;
        nodes.push(centroid + Complex64::from_polar(radius, ang));
    }

    // Dijkstra on the visibility graph
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    loop {
        let mut best = usize::MAX;
        let mut bd = f64::INFINITY;
        for i in 0..n {
            if !done[i] && dist[i] < bd {
                bd = dist[i];
                best = i;
            }
        }
        if best == usize::MAX {
            return None;
        }
        if best == 1 {
            break;
        }
        done[best] = true;
        for j in 0..n {
            if done[j] || j == best {
                continue;
            }
            let w = (nodes[j] - nodes[best]).norm();
            if dist[best] + w >= dist[j] {
                continue;
            }
            if blocked(nodes[best], nodes[j]) {
                continue;
            }
            dist[j] = dist[best] + w;
            prev[j] = best;
        }
    }
    let mut path = vec![1usize];
    while *path.last().unwrap() != 0 {
        let p = prev[*path.last().unwrap()];
        if p == usize::MAX {
            return None;
        }
        path.push(p);
    }
    Some(path.iter().rev().map(|&i| nodes[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn crossing_predicates() {
        assert!(seg_cross_seg(c(0.0, -1.0), c(0.0, 1.0), c(-1.0, 0.0), c(1.0, 0.0)));
        assert!(!seg_cross_seg(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)));
        // shared endpoint is not a crossing
        assert!(!seg_cross_seg(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)));
        assert!(seg_cross_ray(c(1.0, -1.0), c(1.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)));
        assert!(!seg_cross_ray(c(-1.0, -1.0), c(-1.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn router_goes_around() {
        let avoid = vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let path = plan_path(c(0.0, 0.0), c(2.0, 0.0), &avoid, &[], 0.1).unwrap();
        assert!(path.len() > 2, "must detour around the middle point");
        for w in path.windows(2) {
            assert!(seg_point_dist(w[0], w[1], c(1.0, 0.0)) > 0.09);
        }
        assert_eq!(path[0], c(0.0, 0.0));
        assert_eq!(*path.last().unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn straight_when_free() {
        let path = plan_path(c(0.0, 0.0), c(1.0, 1.0), &[c(5.0, 5.0)], &[], 0.1).unwrap();
        assert_eq!(path.len(), 2);
    }
}
