//! The five-coordinate ideal on `(x, t, u, p, q)` whose sections give
//! `(u - u_xx)_t + u (u - u_xx)_x + beta (u - u_xx) u_x = 0`.

use crate::coeff::Scalar;

use super::{ConnectionData, ExteriorIdeal};

pub const COORDINATES: [&str; 5] = ["x", "t", "u", "p", "q"];

/// Generators `xi1 = du^dt - p dx^dt`, `xi2 = dp^dt - q dx^dt`,
/// `xi3 = -du^dx + dq^dx + u du^dt - u dq^dt + beta (u - q) du^dt`.
pub fn b_family_ideal() -> ExteriorIdeal {
    let base = ExteriorIdeal::new(&COORDINATES).with_param("beta");
    let d = |c: &str| base.d(c);
    let s = Scalar::named;
    let (dx, dt, du, dp, dq) = (d("x"), d("t"), d("u"), d("p"), d("q"));
    let xi1 = &du.wedge(&dt) - &dx.wedge(&dt).scale(&s("p"));
    let xi2 = &dp.wedge(&dt) - &dx.wedge(&dt).scale(&s("q"));
    let u = s("u");
    let beta_term = &s("beta") * &(&u - &s("q"));
    let xi3 = &(&(&(&(-du.wedge(&dx)) + &dq.wedge(&dx)) + &du.wedge(&dt).scale(&u)) - &dq.wedge(&dt).scale(&u))
        + &du.wedge(&dt).scale(&beta_term);
    base.with_generator("xi1", xi1).with_generator("xi2", xi2).with_generator("xi3", xi3)
}

/// Scalar Lax pair of the `beta = 2` member written for `y = (psi, psi_x)`
/// with spectral parameter `lambda`:
/// `G = [[0, 1], [1/4 + lambda m, 0]]`,
/// `F = [[p/2, k], [q/2 + k (1/4 + lambda m), -p/2]]`, `k = 1/(2 lambda) - u`,
/// `m = u - q`.
pub fn camassa_holm_connection() -> ConnectionData {
    let s = Scalar::named;
    let lambda = s("lambda");
    let m = &s("u") - &s("q");
    let pot = &Scalar::ratio(1, 4) + &(&lambda * &m);
    let k = &(&Scalar::ratio(1, 2) * &lambda.inv().expect("nonzero")) - &s("u");
    let half = Scalar::ratio(1, 2);
    let p2 = &s("p") * &half;
    let g = vec![vec![Scalar::zero(), Scalar::one()], vec![pot.clone(), Scalar::zero()]];
    let f = vec![vec![p2.clone(), k.clone()], vec![&(&s("q") * &half) + &(&k * &pot), -p2]];
    ConnectionData::new(f, g).expect("2x2")
}
