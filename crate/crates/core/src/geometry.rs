//! Planar convex geometry on points of ℂ: monotone-chain hull and the
//! Hausdorff distance between convex polygons.

use num_complex::Complex64;

/// Cross-product threshold below which three points count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;

#[inline]
fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull in counterclockwise order, starting from the lowest-leftmost
/// point, with collinear points dropped.
///
/// Degenerate inputs yield a single point or the two endpoints of a segment.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= COLLINEAR_TOL);
    if pts.len() <= 2 {
        return pts;
    }

    let mut lower: Vec<Complex64> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= COLLINEAR_TOL
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= COLLINEAR_TOL
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && (lower[0] - lower[1]).norm() <= COLLINEAR_TOL {
        lower.truncate(1);
    }
    lower
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to a convex CCW polygon (zero inside).
pub fn point_polygon_distance(p: Complex64, poly: &[Complex64]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (p - poly[0]).norm(),
        2 => segment_distance(p, poly[0], poly[1]),
        k => {
            let inside = (0..k).all(|i| cross(poly[i], poly[(i + 1) % k], p) >= -COLLINEAR_TOL);
            if inside {
                0.0
            } else {
                (0..k)
                    .map(|i| segment_distance(p, poly[i], poly[(i + 1) % k]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Symmetric Hausdorff distance of two convex polygons.
///
/// The distance to a convex set is a convex function, so its maximum over a
/// polygon is attained at a vertex.
pub fn polygon_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let directed = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|&p| point_polygon_distance(p, y))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn is_convex_ccw(poly: &[Complex64]) -> bool {
    let k = poly.len();
    k < 3 || (0..k).all(|i| cross(poly[i], poly[(i + 1) % k], poly[(i + 2) % k]) >= -COLLINEAR_TOL)
}
