//! Expression parsing/printing, system-definition files and the built-in
//! catalog.

pub mod catalog;
pub mod parser;
pub mod sysdef;

pub use catalog::{catalog, catalog_all, catalog_ids};
pub use parser::{parse_ast, parse_expr, print_expr, Expr};
pub use sysdef::{
    load_system_file, pair_index, parse_system, parse_systems, HamDef, Role, SystemDef, VarDef,
};
