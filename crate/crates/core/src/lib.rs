pub mod builtins;
pub mod conditions;
pub mod cover_group;
pub mod error;
pub mod lattice;
pub mod maass;
pub mod numerics;
pub mod testfn;
pub mod twists;
pub mod zeta_engine;

pub use error::{Error, Result};
pub use numerics::C64;
