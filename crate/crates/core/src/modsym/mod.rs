//! Weight-k modular symbols for Γ₀(N).

pub mod cusps;
pub mod manin;
pub mod p1;
mod quotient;
mod space;

pub use cusps::{cusp_equivalent, Cusp, CuspClasses};
pub use manin::{ManinSymbols, Mat2};
pub use p1::{p1_normalize, P1Class, P1List};
pub use space::ModSymSpace;
