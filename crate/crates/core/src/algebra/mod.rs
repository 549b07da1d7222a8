pub mod identity;
pub mod linsolve;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod ring;

pub use identity::{Evidence, Mode, Verdict, Witness};
pub use poly::{Exponents, Polynomial};
pub use ratfun::RationalFunction;
pub use rational::Rational;
pub use ring::Ring;
