//! Shared numeric conventions, the complexity penalty, index-set masks and
//! the observation container.

mod mask;
mod observation;
mod penalty;
mod sum;

pub use mask::{hamming, mask_complement, SelectionMask};
pub use observation::ObservationVector;
pub use penalty::{ell, ell_with_q, Conventions, DEFAULT_Q};
pub use sum::{mean, neumaier_sum, sample_std};
