//! Numerical realization on concrete states: characteristic integration,
//! half-density transport of KvN amplitudes, finite boosts and closed-form
//! oracles.

mod field;
mod grid;
mod limit;
mod snapshot;
mod state;
mod trajectory;
mod transport;

pub use field::CharacteristicField;
pub use grid::{GridAxis, PhaseGrid};
pub use limit::{pure_state_limit_check, LimitRow, PureStateLimit};
pub use snapshot::{read_snapshot, write_snapshot};
pub use state::{GaussianSpec, PhaseSpaceState};
pub use trajectory::{constant_force_oracle, integrate_trajectory, TrajectoryRecord};
pub use transport::{
    boost_state, boosted_velocity, dynamics_pullback, evolve_snapshots, evolve_state, free_shift_oracle, transport,
    transport_onto, Pullback, TransportOutcome,
};
