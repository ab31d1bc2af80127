//! Master-equation model of the two-atom phase-slip CZ gate, used as an
//! oracle for the analytic channel model.

mod calibrate;
mod gate;
mod integrate;
mod model;
mod pulse;
mod sweep;

pub use calibrate::{blockade_limit_parameters, calibrate_pulse, pulse_infidelity, Calibration};
pub use gate::{basis_state, evolve, noiseless_trajectory, pure_density, simulate_gate, unitary_block, ComputationalMap, EvolvedState, GateOutcome, TRACE_TOLERANCE};
pub use integrate::{evolve_operator, evolve_pure, StepControl};
pub use model::{index, levels, Generator, Level, Outcome, SubspacePopulations, COMPUTATIONAL, DIM, LEVELS};
pub use pulse::{LpParameters, PulseSequence, Segment};
pub use sweep::{calibrated_config, gate_at, sweep_gate_error, ScanPoint, SCAN_COLUMNS};
