//! Single-qubit Kraus channels, their product application to two qubits,
//! and the closed-form scaling rules they induce on Bell-diagonal
//! correlation triples.
//!
//! Each channel acts independently on both qubits:
//! `rho(t) = sum_{i,j} (E_i (x) E_j) rho(0) (E_i (x) E_j)†`, which keeps
//! Bell-diagonal states Bell-diagonal for the three channels here (the
//! generalized amplitude damping channel only at `p = 1/2`; any other `p`
//! injects local z-polarization and must go through the full Kraus path).

use thiserror::Error;

use crate::qmat::{kron, Complex, ComplexMatrix};
use crate::states::{c_from_state, CorrelationVector, StateError, TwoQubitState};

/// Completeness tolerance on `sum E_i† E_i = I`.
pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("channel parameter {name} = {value} outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },
    #[error("no closed-form coefficient map: {0}")]
    MapUnavailable(String),
}

/// A finite set of single-qubit Kraus operators with its parameters.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    pub name: &'static str,
    pub operators: Vec<ComplexMatrix>,
    pub params: Vec<(&'static str, f64)>,
}

impl KrausChannel {
    /// Max entry of `sum E_i† E_i - I`; the completeness certificate.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for e in &self.operators {
            sum = &sum + &(&e.adjoint() * e);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }
}

fn check_param(name: &'static str, value: f64) -> Result<(), ChannelError> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(ChannelError::ParamOutOfRange { name, value });
    }
    Ok(())
}

/// Bit-phase flip: applies `sigma_y` with probability `p`.
pub fn bit_phase_flip(p: f64) -> Result<KrausChannel, ChannelError> {
    check_param("p", p)?;
    let e0 = ComplexMatrix::identity(2).scale((1.0 - p).sqrt());
    let e1 = ComplexMatrix::sigma_y().scale(p.sqrt());
    Ok(KrausChannel {
        name: "bit-phase-flip",
        operators: vec![e0, e1],
        params: vec![("p", p)],
    })
}

/// Depolarizing channel: replaces the qubit by the maximally mixed state
/// with probability `gamma`, split evenly over the three Pauli errors.
pub fn depolarizing(gamma: f64) -> Result<KrausChannel, ChannelError> {
    check_param("gamma", gamma)?;
    let e0 = ComplexMatrix::identity(2).scale((1.0 - gamma).sqrt());
    let w = (gamma / 3.0).sqrt();
    Ok(KrausChannel {
        name: "depolarizing",
        operators: vec![
            e0,
            ComplexMatrix::sigma_x().scale(w),
            ComplexMatrix::sigma_y().scale(w),
            ComplexMatrix::sigma_z().scale(w),
        ],
        params: vec![("gamma", gamma)],
    })
}

/// Generalized amplitude damping: energy loss into a finite-temperature
/// bath. `gamma` is the damping strength, `p` the stationary population.
pub fn gad(p: f64, gamma: f64) -> Result<KrausChannel, ChannelError> {
    check_param("p", p)?;
    check_param("gamma", gamma)?;
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    let sg = gamma.sqrt();
    let s1g = (1.0 - gamma).sqrt();
    let re = |x: f64| Complex::new(x, 0.0);

    let mut e0 = ComplexMatrix::zeros(2, 2);
    e0[(0, 0)] = re(sp);
    e0[(1, 1)] = re(sp * s1g);
    let mut e1 = ComplexMatrix::zeros(2, 2);
    e1[(0, 1)] = re(sp * sg);
    let mut e2 = ComplexMatrix::zeros(2, 2);
    e2[(0, 0)] = re(sq * s1g);
    e2[(1, 1)] = re(sq);
    let mut e3 = ComplexMatrix::zeros(2, 2);
    e3[(1, 0)] = re(sq * sg);

    Ok(KrausChannel {
        name: "gad",
        operators: vec![e0, e1, e2, e3],
        params: vec![("p", p), ("gamma", gamma)],
    })
}

/// Channel kind plus parameters, the unit the dynamics sweep iterates over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    BitPhaseFlip { p: f64 },
    Depolarizing { gamma: f64 },
    Gad { p: f64, gamma: f64 },
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::BitPhaseFlip { .. } => "bit-phase-flip",
            ChannelSpec::Depolarizing { .. } => "depolarizing",
            ChannelSpec::Gad { .. } => "gad",
        }
    }

    pub fn kraus(&self) -> Result<KrausChannel, ChannelError> {
        match *self {
            ChannelSpec::BitPhaseFlip { p } => bit_phase_flip(p),
            ChannelSpec::Depolarizing { gamma } => depolarizing(gamma),
            ChannelSpec::Gad { p, gamma } => gad(p, gamma),
        }
    }
}

/// Closed-form correlation-triple map for the product channel, assuming a
/// physical input triple.
///
/// - bit-phase flip (both qubits): `((1-2p)^2 c1, c2, (1-2p)^2 c3)`
/// - depolarizing: `c_i -> (4 gamma/3 - 1)^2 c_i`
/// - GAD at `p = 1/2`: `((1-gamma) c1, (1-gamma) c2, (1-gamma)^2 c3)`
///
/// GAD with `p != 1/2` has no Bell-diagonal closed form; callers must use
/// [`apply_product`]. All scale factors are in `[0, 1]`, so physical inputs
/// stay physical.
pub fn coefficient_map(
    spec: ChannelSpec,
    c: &CorrelationVector,
) -> Result<CorrelationVector, ChannelError> {
    let mapped = match spec {
        ChannelSpec::BitPhaseFlip { p } => {
            check_param("p", p)?;
            let s = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
            CorrelationVector::from_traces(s * c.c1, c.c2, s * c.c3)
        }
        ChannelSpec::Depolarizing { gamma } => {
            check_param("gamma", gamma)?;
            let s = (4.0 * gamma / 3.0 - 1.0) * (4.0 * gamma / 3.0 - 1.0);
            CorrelationVector::from_traces(s * c.c1, s * c.c2, s * c.c3)
        }
        ChannelSpec::Gad { p, gamma } => {
            check_param("p", p)?;
            check_param("gamma", gamma)?;
            if (p - 0.5).abs() > 1e-12 {
                return Err(ChannelError::MapUnavailable(format!(
                    "gad with p = {p} (Bell-diagonal form only holds at p = 1/2)"
                )));
            }
            let u = 1.0 - gamma;
            CorrelationVector::from_traces(u * c.c1, u * c.c2, u * u * c.c3)
        }
    };
    Ok(mapped)
}

/// Product application `rho -> sum_{i,j} (E_i (x) E_j) rho (E_i (x) E_j)†`,
/// with output-state validation.
pub fn apply_product(
    channel: &KrausChannel,
    state: &TwoQubitState,
) -> Result<TwoQubitState, StateError> {
    let mut out = ComplexMatrix::zeros(4, 4);
    for ei in &channel.operators {
        for ej in &channel.operators {
            let k = kron(ei, ej);
            out = &out + &(&(&k * state.matrix()) * &k.adjoint());
        }
    }
    TwoQubitState::new(out)
}

/// Evolved coefficient triple via the full Kraus path.
pub fn kraus_map(
    spec: ChannelSpec,
    c: &CorrelationVector,
) -> Result<CorrelationVector, SweepPathError> {
    let channel = spec.kraus()?;
    let rho = crate::states::bd_from_c(c)?;
    let evolved = apply_product(&channel, &rho)?;
    Ok(c_from_state(&evolved))
}

/// Either side of the closed-form / Kraus dual route can fail.
#[derive(Debug, Error)]
pub enum SweepPathError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Exponential damping schedule `gamma = 1 - exp(-gamma' t)`.
pub fn gamma_of_time(gamma_prime: f64, t: f64) -> f64 {
    debug_assert!(gamma_prime >= 0.0 && t >= 0.0);
    1.0 - (-gamma_prime * t).exp()
}
