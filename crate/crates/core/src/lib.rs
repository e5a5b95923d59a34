//! Exact linear algebra over group algebras of finite groups, reduced exterior powers,
//! Stickelberger elements of abelian extensions of the rationals and the consistency
//! checks relating them.

pub mod arith;
pub mod linalg;
pub mod groups;
pub mod algebra;
pub mod chars;
pub mod reps;
pub mod galg;
pub mod lfun;
pub mod systems;
pub mod cli;
