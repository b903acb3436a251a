//! Self-adjoint-order chains between diagonal unitaries and the identity.

use crate::error::{Error, Result};
use crate::linalg::{c64, diagonal, CMatrix, C64};

/// Tolerance on the determinant-type invariant being ±1.
pub const INVARIANT_TOL: f64 = 1e-8;

const EXACT: f64 = 1e-13;

/// A chain `diag(λ) = X₀, X₁, …, X_m = I` of symmetric unitaries with
/// `X_{j}* X_{j+1}` a symmetry for every j, and `m ≤ 2k − 1`.
///
/// Each pass moves the leading entry to 1 and multiplies it into its
/// neighbour: one step when it is −1, otherwise two steps through a swap-type
/// block `[[0, γ], [γ, 0]]` with `γ² = ab`. Requires `∏λ = ±1`.
pub fn diagonal_chain(lambda: &[C64]) -> Result<Vec<CMatrix>> {
    let k = lambda.len();
    let prod: C64 = lambda.iter().product();
    let one = c64(1.0, 0.0);
    let sign = if (prod - one).norm() <= INVARIANT_TOL {
        one
    } else if (prod + one).norm() <= INVARIANT_TOL {
        -one
    } else {
        return Err(Error::InvariantObstruction(format!("product of eigenvalues is {prod}, not ±1")));
    };

    let mut cur = lambda.to_vec();
    let mut out = vec![diagonal(&cur)];
    for j in 0..k.saturating_sub(1) {
        let (a, b) = (cur[j], cur[j + 1]);
        if (a - one).norm() <= EXACT {
            continue;
        }
        let ab = a * b;
        if (a + one).norm() > EXACT {
            let gamma = ab.sqrt();
            let mut x = diagonal(&cur);
            x[(j, j)] = c64(0.0, 0.0);
            x[(j + 1, j + 1)] = c64(0.0, 0.0);
            x[(j, j + 1)] = gamma;
            x[(j + 1, j)] = gamma;
            out.push(x);
        }
        cur[j] = one;
        cur[j + 1] = ab;
        out.push(diagonal(&cur));
    }
    let last = out.len() - 1;
    if sign == one {
        // The remaining entry is 1 up to the invariant tolerance.
        if out.len() == 1 {
            if (diagonal(&cur) - CMatrix::identity(k, k)).norm() > EXACT {
                out.push(CMatrix::identity(k, k));
            }
        } else {
            out[last] = CMatrix::identity(k, k);
        }
    } else {
        out.push(CMatrix::identity(k, k));
    }
    Ok(out)
}
