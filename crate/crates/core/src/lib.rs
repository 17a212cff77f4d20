pub mod bound;
pub mod error;
pub mod extrapolate;
pub mod geometry;
pub mod roots;
pub mod scattering;
pub mod specfun;
pub mod well;
pub mod zerorange;
