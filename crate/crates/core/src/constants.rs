//! CODATA 2018 constants and the shared quadrature ordering.

/// Planck constant h (J s), exact.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant h/2π (J s).
pub const HBAR: f64 = 1.054_571_817_646_156_4e-34;
/// Boltzmann constant (J/K), exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Quadrature ordering used by every matrix in the crate: mechanics first,
/// then the optical field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Q = 0,
    P = 1,
    X = 2,
    Y = 3,
}

pub const BASIS: [Quadrature; 4] = [Quadrature::Q, Quadrature::P, Quadrature::X, Quadrature::Y];

impl Quadrature {
    pub const fn index(self) -> usize {
        self as usize
    }
}
