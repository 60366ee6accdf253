pub mod error;
pub mod linalg;
pub mod root_data;
pub mod affine_weyl;
pub mod literal;
pub mod conjugacy;
pub mod par;
pub mod poly;
pub mod hecke;
pub mod adlv;
pub mod sweep;
