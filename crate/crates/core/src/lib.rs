//! Planar polynomial vector fields realizing prescribed time-1 map jets.
//!
//! The crate covers the forward problem (closed-form flow jets), the inverse
//! problem (a field whose time-1 map has a given jet, with resonance
//! bookkeeping), the first Birkhoff constant of an elliptic map jet, and
//! seasonal switching between fields.

pub mod angle;
pub mod birkhoff;
pub mod catalog;
pub mod error;
pub mod exppoly;
pub mod fit;
pub mod flow;
pub mod inverse;
pub mod io;
pub mod jets;
pub mod ode;
pub mod param;
pub mod sample;
pub mod scalar;
pub mod seasonal;
pub mod series;

pub use birkhoff::{birkhoff_b1, birkhoff_reduce, radial_drift_oracle, StabilityReport, Verdict};
pub use error::{Error, Result};
pub use exppoly::ExpPoly;
pub use flow::{flow_at, flow_expand, flow_numeric_oracle, time_one_map, FlowJet};
pub use jets::{jet_add, jet_compose, jet_conjugate, jet_eval, jet_mul, Jet, MapJet, VectorFieldJet};
pub use inverse::{closed_form_quadratic, invert_map, resonance_table, Family, ResonanceTable, SolveOutcome};
pub use param::ParamPoly;
pub use scalar::{Cx, Real};
pub use seasonal::{classify_origin, integrate_seasonal, paradox_demo, ParadoxReport, SeasonSchedule, TrajectorySample};
pub use series::{Monomial, Series};

pub type MapJet64 = MapJet<f64>;
pub type VectorFieldJet64 = VectorFieldJet<f64>;
pub type FlowJet64 = FlowJet<f64>;
pub type SolveOutcome64 = SolveOutcome<f64>;
pub type StabilityReport64 = StabilityReport<f64>;
pub type ExpPoly64 = ExpPoly<Cx<f64>>;
pub type MapJet32 = MapJet<f32>;
pub type VectorFieldJet32 = VectorFieldJet<f32>;
