//! Revival detection on recorded time series.

/// Height of the late-time revival of a series: the distance from the first
/// global minimum to the largest value reached after it.
///
/// Monotonically decreasing series put the minimum at the last sample and
/// report exactly 0.  A series that dips and climbs back reports the climb,
/// regardless of small ripples before the dip.
pub fn revival_height(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let mut i0 = 0;
    let mut floor = series[0];
    for (i, &x) in series.iter().enumerate() {
        if x < floor {
            floor = x;
            i0 = i;
        }
    }
    let ceiling = series[i0..]
        .iter()
        .fold(f64::NEG_INFINITY, |acc, &x| acc.max(x));
    (ceiling - floor).max(0.0)
}
