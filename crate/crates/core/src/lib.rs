pub mod axioms;
pub mod category;
pub mod cli;
pub mod cpo;
pub mod diagram;
pub mod error;
pub mod finfun;
pub mod games;
pub mod int;
pub mod object;
pub mod stoch;
pub mod transducer;
