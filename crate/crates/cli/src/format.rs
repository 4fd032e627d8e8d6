/// Shortest representation that parses back to the same `f64`.
///
/// Plain decimal notation for `1e-5 <= |x| < 1e16` and zero, scientific
/// notation otherwise. Output never depends on the locale.
pub fn fmt_num(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
