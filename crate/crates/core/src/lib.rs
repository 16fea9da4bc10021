pub mod blockdsl;
pub mod checks;
pub mod circulant;
pub mod formulas;
pub mod generators;
pub mod meancycle;
pub mod periodic;
pub mod rational;
pub mod stategraph;
