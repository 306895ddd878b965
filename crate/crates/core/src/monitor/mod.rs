//! Regularity monitoring of recorded trajectories.
//!
//! The monitor never touches the solver: it reads snapshots, evaluates the
//! weak-Lebesgue criteria for each Prodi-Serrin pair and checks the Gronwall
//! envelopes with empirically calibrated constants.

mod constants;
mod criteria;
mod envelopes;
mod pair;
mod report;
mod trajectory;

pub use constants::{
    advection_ratio, calibrate, convective_ratio, embedding_ratio, held_out_containment, interpolation_ratio,
    member_ratios, CalibratedConstants, Containment, FamilyKind, FieldFamily, InterpolationConstant, Member,
    MemberRatios, PairConstant, Provenance, MIN_FAMILY_SIZE, SAFETY_FACTOR,
};
pub use criteria::{
    c1, gamma_threshold, k_series, theorem1_criterion, theorem1_verdict, theorem2_criterion, theorem2_verdict,
    GammaThreshold, Theorem1Verdict, Theorem2Verdict, VerdictStatus,
};
pub use envelopes::{
    enstrophy_residual, psi_envelope, scalar_envelope, scalar_envelopes, velocity_envelope, velocity_radius,
    weak_l1_chain, EnstrophyCoefficients, EnstrophyResidual, Envelope, PsiBound, PsiCandidate, PsiInputs, PsiReport,
    WeakL1Chain,
};
pub use pair::ProdiSerrinPair;
pub use report::{
    build_report, InterpolationStats, MonitorConfig, MonitorReport, PairReport, RatioStats, DEFAULT_DELTA_GRID,
    DEFAULT_EPS_GRID, THEOREM1_NOTE,
};
pub use trajectory::{Diagnostics, Sample, Trajectory};
