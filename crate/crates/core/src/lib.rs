pub mod cli;
pub mod clifford;
pub mod dual;
pub mod group;
pub mod gw;
pub mod io;
pub mod library;
pub mod rcoeff;
pub mod repr;
