//! Double roots at the crossings of zero rows and zero columns.
//!
//! If grid row `beta` and grid column `gamma` of a codeword both vanish, the
//! message polynomial `h` has `(x - alpha)^2 | h` for `alpha = beta + gamma`.

use crate::codec::{relabel, CodeInstance};
use crate::error::{param, Result};
use crate::field::Elem;

/// Largest degree for which divisibility by `(x - alpha)^2` is also confirmed
/// by synthetic division.
pub const DIVISION_CHECK_MAX_DEGREE: usize = 1 << 10;

/// Checks `h(alpha) = h'(alpha) = 0` at every crossing of a zero row and a
/// zero column of the encoded grid, where `h = sum msg[i] * basis_polys[i]`.
/// In characteristic 2 the derivative test alone does not imply a double
/// root, so small degrees are also divided out twice.
pub fn double_root_check(code: &CodeInstance, msg: &[Elem]) -> Result<bool> {
    if msg.iter().all(|e| e.is_zero()) {
        return param("double_root_check needs a nonzero message");
    }
    let ctx = code.ctx();
    let pair = code.pair();
    let h = code.message_poly(msg)?;
    let dh = h.derivative();
    let grid = relabel(pair, &code.encode(msg)?)?;
    let n = code.n_frak();
    let divide = h.degree().is_some_and(|d| d <= DIVISION_CHECK_MAX_DEGREE);
    for i in grid.zero_rows() {
        for j in grid.zero_cols() {
            let alpha = pair.eval_points()[i * n + j];
            if !h.eval(ctx, alpha).is_zero() || !dh.eval(ctx, alpha).is_zero() {
                return Ok(false);
            }
            if divide {
                let (quot, rem) = h.div_linear(ctx, alpha);
                if !rem.is_zero() || !quot.div_linear(ctx, alpha).1.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
