pub mod certificate;
pub mod exactmath;
pub mod heisenberg;
pub mod reps;
pub mod curve;
pub mod homology;
pub mod twist;
pub mod density;
pub mod cli;
