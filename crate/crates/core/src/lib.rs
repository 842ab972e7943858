pub mod error;
pub mod exactnum;
pub mod polyalg;
pub mod orthopoly;
pub mod identities;
pub mod stochastic;
pub mod cli;
