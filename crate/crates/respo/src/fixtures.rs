//! The bundled dish fixtures, parsed.

use respo_core::{ABox, OMQ};

use crate::textio::{parse_abox, parse_query, parse_tbox};

pub const FIG1_TBOX: &str = include_str!("../fixtures/fig1/tbox.txt");
pub const FIG1_ABOX: &str = include_str!("../fixtures/fig1/abox.txt");
pub const FIG1_QUERY: &str = include_str!("../fixtures/fig1/query.txt");
pub const VARIANT_TBOX: &str = include_str!("../fixtures/variant/tbox.txt");
pub const VARIANT_ABOX: &str = include_str!("../fixtures/variant/abox.txt");
pub const VARIANT_QUERY: &str = include_str!("../fixtures/variant/query.txt");

fn load(tbox: &str, abox: &str, query: &str) -> (ABox, OMQ) {
    let t = parse_tbox(tbox).expect("bundled TBox parses");
    let a = parse_abox(abox).expect("bundled ABox parses");
    let q = parse_query(query).expect("bundled query parses");
    (a, OMQ::new(t, q).expect("bundled OMQ is well formed"))
}

/// Horn TBox with a qualified existential; supports {f1,f2}, {f3,f4,f5},
/// {f3,f6,f7}.
pub fn fig1() -> (ABox, OMQ) {
    load(FIG1_TBOX, FIG1_ABOX, FIG1_QUERY)
}

/// DL-Lite_R restatement of [`fig1`] as an interaction-free UCQ with the
/// same minimal supports.
pub fn variant() -> (ABox, OMQ) {
    load(VARIANT_TBOX, VARIANT_ABOX, VARIANT_QUERY)
}
