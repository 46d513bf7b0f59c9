//! Exact combinatorics and algebra behind mod `p` local-global compatibility
//! predictions for `GL_n` over an unramified extension of `Q_p`.

pub mod conjugacy;
pub mod cycles;
pub mod fq;
pub mod isotypic;
pub mod phigamma;
pub mod serre;
pub mod weyl;
