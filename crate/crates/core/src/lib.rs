pub mod chevalley;
pub mod compact;
pub mod curvature;
pub mod einstein;
pub mod error;
pub mod involution;
pub mod linalg;
pub mod model;
pub mod registry;
pub mod root_system;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
