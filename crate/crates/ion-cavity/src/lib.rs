//! Exact dynamics of three trapped two-level ions coupled to a
//! red-sideband-tuned cavity mode, with a complete multipartite entanglement
//! characterization of the evolved states.
//!
//! The interaction exchanges one collective ionic excitation for one phonon
//! plus one photon, which confines any separable preparation to a four-state
//! chain. [`dynamics`] evaluates that chain in closed form, [`oracle`]
//! re-derives it by brute-force propagation on the truncated Fock space, and
//! [`entanglement`] quantifies the resulting ion-photon-phonon correlations
//! through global, K-way, and constrained partial-transpose negativities.
//! [`sweep`] drives parameter sweeps and emits CSV/JSON datasets.
//!
//! Start with the `examples/` directory, which exercises one capability per
//! file, or with the `ion-cavity` binary (`sweep`, `headline`, `verify`).

pub mod basis;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};

pub use dynamics::{AmplitudeSet, Preparation, SimulationConfig};
pub use entanglement::{
    entanglement_report, KwayNegativities, NegativityReport, Subsystem,
};
pub use sweep::{run_sweep, FigureRecipe, SweepData, SweepRequest};
