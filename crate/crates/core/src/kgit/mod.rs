//! Grothendieck-group shadow of the spherical pair attached to a simple
//! balanced wall crossing for `C*` acting linearly on `C^n`.
//!
//! Conventions: `t` is the class of the weight-one character and the input
//! weights are the weights of the destabilising one-parameter subgroup on
//! the `+` side. `K(C)` has basis `t^k0, ..., t^(k0+η)`; `K(X//-)` is
//! identified with the lower `η` characters and `K(X//+)` with the upper
//! `η`, each modulo the Koszul class of the corresponding unstable blade.

mod maps;
mod model;
mod report;

pub use maps::{
    assemble_kp, assemble_pk, dual_ic_criterion, flop_flop, ic_criterion, iota_maps, parity_check,
    spherical_data, structure_maps, IcVerdict, IotaMaps, ParityCheck, SphericalData, StructureMaps,
    FIXED_LOCUS_LABEL,
};
pub use model::{exponent_label, exponent_labels, Side, WallModel, WindowBases, MAX_ETA};
pub use report::{
    check_invariants, full_report, kp_defect_report, InvariantFamily, ReportMatrices, Violation,
    WallComputation, WallReport,
};
