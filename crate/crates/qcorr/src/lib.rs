//! Quantum correlation measures for two-qubit states under local noise.
//!
//! The crate models Bell-diagonal two-qubit states, evolves them through
//! Markovian single-qubit Kraus channels (bit-phase flip, depolarizing,
//! generalized amplitude damping), and computes four correlation
//! quantifiers: Wootters concurrence plus the Hilbert-Schmidt, trace-norm
//! and relative-entropy variants of measurement-induced nonlocality (MIN).
//!
//! Every closed form ships with an independent brute-force counterpart
//! (a measurement-axis sweep, or the general Wootters route) so results can
//! be cross-checked at runtime; `qcorr verify` runs the whole battery.

pub mod channels;
pub mod qmat;
pub mod states;

pub use channels::{ChannelError, ChannelSpec, KrausChannel};
pub use qmat::{ComplexMatrix, HermitianEigenSystem, QmatError};
pub use states::{BellSpectrum, CorrelationVector, StateError, Subsystem, TwoQubitState};
