pub mod biregular;
pub mod cells;
pub mod coxeter;
pub mod equivariantk;
pub mod groups;
pub mod hecke;
pub mod invmodule;
pub mod laurent;
pub mod lincomb;
pub mod linalg;

pub use coxeter::{CoxeterError, CoxeterSystem, ElemId, GroupTable};
pub use hecke::{Hecke, HeckeElt, HeckeError};
pub use invmodule::{CoeffTable, IModElt, InvModule, ModuleError};
pub use laurent::{LaurentError, LaurentInt, PolyMatrix};
pub use lincomb::LinComb;
