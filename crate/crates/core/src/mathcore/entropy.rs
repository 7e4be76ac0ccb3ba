use crate::error::{domain, Result};

/// Shannon entropy in bits of a two-outcome distribution (p, 1 − p).
///
/// Uses 0·log 0 = 0. The two terms are summed smaller-probability first so
/// the result is bit-for-bit symmetric whenever `1 - (1 - p) == p`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!(
            "binary_entropy: probability {p} outside [0, 1]"
        )));
    }
    let q = 1.0 - p;
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    Ok(plogp(lo) + plogp(hi))
}

fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}
