//! Lower and upper bounds for priority evacuation from a regular n-gon by a
//! Queen and `k` Servants, and for the weighted two-agent search variant.

pub mod configspace;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod reductions;
pub mod report;
pub mod search;
pub mod upperbounds;

pub use error::{EvacError, Result};
