pub mod chain;
pub mod fit;
pub mod freqplan;
pub mod gatesim;
pub mod noise;
pub mod tradeoff;
