//! Small exact linear-algebra kernels: dense bit-matrices over F2 and
//! matrices over the univariate polynomial ring F2[x] with Smith normal
//! form. Everything here is desk-scale (tens of rows), so the
//! implementations favor clarity over asymptotics.

pub mod gf2;
pub mod poly;
pub mod polymat;

pub use gf2::BitMatrix;
pub use poly::Poly;
pub use polymat::{PolyMatrix, Snf};
