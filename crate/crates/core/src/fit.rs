//! Ordinary least-squares line fits.

/// Slope of the least-squares line through `(x, y)` points.
///
/// Returns NaN for fewer than two distinct abscissae.
pub fn slope(pts: &[(f64, f64)]) -> f64 {
    line(pts).0
}

/// `(slope, intercept)` of the least-squares line.
pub fn line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let s = sxy / sxx;
    (s, my - s * mx)
}
