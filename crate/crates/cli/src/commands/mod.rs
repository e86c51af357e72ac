mod compute;
mod fit;
mod plot;
mod sample;
mod system;

pub use compute::compute;
pub use fit::{error, fit};
pub use plot::plotdata;
pub use sample::{sample, verify};
