pub mod bcs;
pub mod canonical;
pub mod cli;
pub mod fock;
pub mod gcm;
pub mod io;
pub mod jordan;
pub mod linalg;
