//! Jacobi elliptic functions by the arithmetic–geometric mean (descending
//! Landen) ladder.

use crate::SolutionError;

const MAX_LADDER: usize = 40;

/// `(sn, cn, dn)` of argument `u` and parameter `m = k²`, `0 ≤ m < 1`.
pub fn sn_cn_dn(u: f64, m: f64) -> (f64, f64, f64) {
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut a = [0.0; MAX_LADDER + 1];
    let mut c = [0.0; MAX_LADDER + 1];
    a[0] = 1.0;
    let mut b = (1.0 - m).sqrt();
    c[0] = m.sqrt();
    let mut n = 0;
    while c[n].abs() > f64::EPSILON && n < MAX_LADDER {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    (sn, cn, (1.0 - m * sn * sn).sqrt())
}

/// Jacobi `cn(χ, ρ)` with modulus `ρ`, `0 ≤ ρ² < 1`.
pub fn jacobi_cn(chi: f64, rho: f64) -> Result<f64, SolutionError> {
    let m = rho * rho;
    if !(0.0..1.0).contains(&m) || !chi.is_finite() {
        return Err(SolutionError::InvalidParam {
            name: "rho".into(),
            reason: format!("modulus {rho} needs 0 ≤ ρ² < 1"),
        });
    }
    Ok(sn_cn_dn(chi, m).1)
}
