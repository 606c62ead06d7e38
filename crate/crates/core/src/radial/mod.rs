//! Even radial-closure function expressions, their exact transforms, and
//! the Cohn–Elkies verification layer.

mod descriptor;
mod expr;
mod verify;

pub use expr::{
    EigenGroup, EvenFunction, Expansion, GeometricKind, GeometricTerm, Node, TailCertificate,
};
pub use verify::{
    density_bound, ft_check, hankel_oracle, radius_of_positivity, radius_of_positivity_sampled,
    verify_ce, CEReport, FtCheck, FtSample, GridSpec, RadialProfile,
};
