//! Unit system: energies in meV, times in ps, phases in radians.

/// Reduced Planck constant in meV·ps.
pub const HBAR: f64 = 0.658_211_956_9;
