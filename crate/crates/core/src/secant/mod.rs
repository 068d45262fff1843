//! Secant varieties of parametrized varieties: Terracini rank estimates,
//! expected dimensions and the bound tables.

mod tables;
mod terracini;
mod variety;

pub use tables::{
    rc2_search, table_csv, table_grassmann, table_json, table_segre_veronese, table_ver, ver_bound, Family,
    Rc2Entry, ReferenceRow, TableKind, TableRow, VerReference, VerRow, GRASSMANN_REFERENCE,
    SEGRE_VERONESE_REFERENCE, VER_REFERENCE,
};
pub use terracini::{expected_secant_dim, is_defective, terracini_secant_dim, vsp_dim};
pub use variety::{ParamVariety, VarietyKind};
