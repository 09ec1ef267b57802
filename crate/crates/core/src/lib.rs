pub mod audit;
pub mod error;
pub mod field;
pub mod harness;
pub mod model;
pub mod pma1;
pub mod protocol;
pub mod spma1;
pub mod spma2;
pub mod transcript;
