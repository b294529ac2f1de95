use crate::ridge::sign;

/// Indices of the `s` largest-magnitude entries, ties to the lowest index.
pub fn top_indices(a: &[f64], s: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_by(|&i, &j| a[j].abs().total_cmp(&a[i].abs()).then(i.cmp(&j)));
    idx.truncate(s.min(a.len()));
    idx
}

/// Whether `v` agrees with `sign(a)` on the `s` dominant coordinates of `a`.
pub fn hit_membership(v: &[f64], a: &[f64], s: usize) -> bool {
    top_indices(a, s).into_iter().all(|i| v[i] == sign(a[i]))
}

/// `σ_s(a)`: ℓ1 mass outside the `s` largest entries.
pub fn best_s_term_error(a: &[f64], s: usize) -> f64 {
    let mut mags: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    mags.iter().skip(s).rev().sum()
}
