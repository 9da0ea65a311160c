pub mod cli;
pub mod dynamics;
pub mod error;
pub mod formats;
pub mod frames;
pub mod matrixcore;
pub mod metrics;
pub mod protocols;
pub mod random;
pub mod transport;
