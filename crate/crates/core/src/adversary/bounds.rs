use statrs::function::gamma::gamma;

/// `c_r = 2^{−r} Γ(r + 1 − ⌈r⌉) / Γ(r + 1)`; equals `2^{−r}/r!` for integer `r`.
pub fn c_r(r: f64) -> f64 {
    2f64.powf(-r) * gamma(r + 1.0 - r.ceil()) / gamma(r + 1.0)
}

/// `c_r' = 2^{−3/2} c_r`.
pub fn c_r_randomized(r: f64) -> f64 {
    2f64.powf(-1.5) * c_r(r)
}

/// Deterministic floor `c_r (1/(8 ln 2n))^{r(1/p − 1)}`.
pub fn lower_bound_value(n: usize, r: f64, p: f64) -> f64 {
    assert!(n >= 1 && r > 0.0 && p > 0.0 && p <= 1.0, "lower bound needs n >= 1, r > 0, p in (0, 1]");
    let exponent = r * (1.0 / p - 1.0);
    c_r(r) * (1.0 / (8.0 * (2.0 * n as f64).ln())).powf(exponent)
}

/// Randomized floor `c_r' (1/(8 ln 4(n + 1)))^{r(1/p − 1)}`.
pub fn randomized_lower_bound_value(n: usize, r: f64, p: f64) -> f64 {
    assert!(r > 0.0 && p > 0.0 && p <= 1.0, "lower bound needs r > 0, p in (0, 1]");
    let exponent = r * (1.0 / p - 1.0);
    c_r_randomized(r) * (1.0 / (8.0 * (4.0 * (n as f64 + 1.0)).ln())).powf(exponent)
}
