//! A height threshold beyond which orbits provably never repeat.
//!
//! For forms `F, G` of degree `d` there are forms `A_k, B_k` of degree `d - 1`
//! with `A_0 F + B_0 G = Res * Y^(2d-1)` and `A_1 F + B_1 G = Res * X^(2d-1)`,
//! read off the adjugate of the Sylvester-type matrix of the linear map
//! `(A, B) -> A F + B G`. For coprime integral `(x, y)` the gcd of
//! `F(x, y)` and `G(x, y)` divides `Res`, which gives
//!
//! * over `Q`: `H(phi(P)) >= H(P)^d / N` with `N = max_k (|A_k|_1 + |B_k|_1)`,
//! * over `Fp(t)`: `h(phi(P)) >= d h(P) - c` with `c` the largest degree of a
//!   coefficient of `A_k, B_k`.
//!
//! Once `H^(d-1) > N` (resp. `(d-1) h > c`) the height increases strictly at
//! every later step, so the point is not preperiodic.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::GlobalRing;
use crate::ratmap::{bareiss_determinant, RationalMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeBound {
    /// Points of height strictly greater than this are wandering.
    pub threshold: BigUint,
}

/// The escape threshold of a map of degree at least 2; `None` in degree 1.
pub fn escape_bound<R: GlobalRing>(ring: &R, map: &RationalMap<R::Elem>) -> Option<EscapeBound> {
    let d = map.degree();
    if d < 2 {
        return None;
    }
    let n = 2 * d;
    // column i < d holds F shifted by i, column d + i holds G shifted by i;
    // row k is the coefficient of X^k Y^(2d-1-k)
    let mut m = vec![vec![ring.zero(); n]; n];
    for i in 0..d {
        for (j, c) in map.f().iter().enumerate() {
            m[i + j][i] = c.clone();
        }
        for (j, c) in map.g().iter().enumerate() {
            m[i + j][d + i] = c.clone();
        }
    }
    let adj_column = |k: usize| -> Vec<R::Elem> {
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<R::Elem>> = (0..n)
                    .filter(|&r| r != k)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[r][c].clone())
                            .collect()
                    })
                    .collect();
                bareiss_determinant(ring, minor)
            })
            .collect()
    };
    let columns = [adj_column(0), adj_column(n - 1)];
    let threshold = if ring.infinity_is_archimedean() {
        let norm = columns
            .iter()
            .map(|col| col.iter().map(|a| ring.height(a)).sum::<BigUint>())
            .max()
            .unwrap();
        norm.nth_root((d - 1) as u32)
    } else {
        let c = columns
            .iter()
            .flatten()
            .filter(|a| !ring.is_zero(a))
            .map(|a| ring.height(a))
            .max()
            .unwrap_or_else(BigUint::zero);
        c / BigUint::from(d - 1)
    };
    Some(EscapeBound { threshold })
}
