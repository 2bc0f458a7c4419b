//! Datasets: the labeled matrix type, synthetic generators, CSV ingestion,
//! range scaling and train/test/fold partitioning.

mod csv_io;
mod dataset;
mod generate;
mod scaler;
mod split;

pub use csv_io::{load_csv, read_csv, CsvOptions};
pub use dataset::LabeledDataset;
pub use generate::{make_blobs, make_moons};
pub use scaler::{fit_scaler, RangeScaler, DEFAULT_TARGET_HI, DEFAULT_TARGET_LO};
pub use split::{split_indices, stratified_kfold, train_test_split, FoldAssignment, SplitSpec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded generator used everywhere randomness is needed. ChaCha keeps the
/// stream identical across platforms.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
