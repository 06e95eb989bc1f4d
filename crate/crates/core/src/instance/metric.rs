//! TSPLIB distance functions, returning the already-rounded value as `f64`.

use super::Point;

const GEO_PI: f64 = 3.141592;
const EARTH_RADIUS: f64 = 6378.388;

fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

pub fn euc_2d_distance(a: Point, b: Point) -> f64 {
    nint((a.x - b.x).hypot(a.y - b.y))
}

pub fn ceil_2d_distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y).ceil()
}

/// Pseudo-Euclidean distance of the ATT instances.
pub fn att_distance(a: Point, b: Point) -> f64 {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    let r = ((dx * dx + dy * dy) / 10.0).sqrt();
    let t = nint(r);
    if t < r {
        t + 1.0
    } else {
        t
    }
}

/// Converts a TSPLIB `DDD.MM` coordinate pair to (latitude, longitude)
/// radians.
pub fn geo_radians(x: f64, y: f64) -> (f64, f64) {
    let convert = |v: f64| {
        let deg = v.trunc();
        let min = v - deg;
        GEO_PI * (deg + 5.0 * min / 3.0) / 180.0
    };
    (convert(x), convert(y))
}

/// Great-circle distance on the idealized TSPLIB sphere, truncated.
pub fn geo_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let q1 = (a.1 - b.1).cos();
    let q2 = (a.0 - b.0).cos();
    let q3 = (a.0 + b.0).cos();
    let cos_angle = (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).clamp(-1.0, 1.0);
    (EARTH_RADIUS * cos_angle.acos() + 1.0).trunc()
}
