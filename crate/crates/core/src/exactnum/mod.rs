//! Exact arithmetic over Q and Q(sqrt 2).

mod quad;
mod rational;

pub use quad::{compare, midpoint, QuadExt};
pub use rational::Rational;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QxOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Unary; the second operand is ignored.
    Neg,
}

/// Field operation; `Div` by zero is an error rather than a panic.
pub fn qx_arith(op: QxOp, x: &QuadExt, y: &QuadExt) -> Result<QuadExt, Error> {
    Ok(match op {
        QxOp::Add => x + y,
        QxOp::Sub => x - y,
        QxOp::Mul => x * y,
        QxOp::Div => x.try_div(y)?,
        QxOp::Neg => -x,
    })
}

/// `|x - y|`
pub fn dist(x: &QuadExt, y: &QuadExt) -> QuadExt {
    (x - y).abs()
}
