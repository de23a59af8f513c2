//! Exact arithmetic in the ordered field ℝ(ε), restricted to rational
//! coefficients: rational functions in a single positive infinitesimal ε.

mod nonstd;
mod poly;
mod rational;

pub use nonstd::NonstdNum;
pub use poly::EpsPoly;
pub use rational::Rational;
