//! Arthur–Nimue–Merlin reduction games at desk scale.

pub mod decide;
pub mod frames;
pub mod game;
pub mod oracles;
pub mod vm;
pub mod witnesses;
