//! Risk-hull variable selection for the sparse normal-means model
//! `X = θ + σξ`.
//!
//! * [`selector`]: the penalized preselector `Ĩ(K)` and the thresholding
//!   selector `Î(K)`, plus the Mallows `Cp` baseline.
//! * [`oracle`]: the generalized active set `I*(A, θ)` the selector targets,
//!   its path over `A` and the distinct-active-set membership check.
//! * [`metrics`]: FDR, FPR, NDR, FNR, the four multiple-testing risks, the
//!   Hamming risk and k-FWER/k-FWNR.
//! * [`uq`]: Hamming-ball confidence sets around the selector.
//! * [`noise`]: Gaussian, AR(1), bounded, Rademacher and averaged noise, and
//!   an empirical subset-sum tail check.
//! * [`bounds`]: minimax Hamming-risk lower bounds.
//! * [`harness`]: seeded, replication-parallel Monte-Carlo experiments.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod noise;
pub mod oracle;
pub mod primitives;
pub mod selector;
pub mod uq;

mod sweep;

pub use error::{Error, Result};
pub use metrics::{aggregate, confusion, proportions, ConfusionCounts, ProportionSet, RateReport};
pub use oracle::{active_set, active_set_path, in_theta_k, strong_signal_theta, vsp, ActiveSetResult, SignPattern, SignalVector};
pub use primitives::{ell, hamming, mask_complement, Conventions, ObservationVector, SelectionMask};
pub use selector::{mallows_cp, preselect, select, SelectionResult, SelectorConfig};
pub use uq::{ball_contains, evaluate_uq, radius, ConfidenceBall, UqConfig, UqReport};
