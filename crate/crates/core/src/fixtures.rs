//! Bundled example models.

use crate::format::parse_hdta;
use crate::hdta::HdtaModel;

pub const FIG3: &str = include_str!("../fixtures/fig3.hdta");
pub const FIG4: &str = include_str!("../fixtures/fig4.hdta");
pub const FIG5: &str = include_str!("../fixtures/fig5.hdta");
pub const FIG5_NO_SQUARE: &str = include_str!("../fixtures/fig5-no-square.hdta");
pub const FIG9_A: &str = include_str!("../fixtures/fig9-a.hdta");
pub const FIG9_B: &str = include_str!("../fixtures/fig9-b.hdta");

/// Every bundled fixture as `(file name, text)`.
pub const ALL: [(&str, &str); 6] = [
    ("fig3.hdta", FIG3),
    ("fig4.hdta", FIG4),
    ("fig5.hdta", FIG5),
    ("fig5-no-square.hdta", FIG5_NO_SQUARE),
    ("fig9-a.hdta", FIG9_A),
    ("fig9-b.hdta", FIG9_B),
];

fn load(text: &str) -> HdtaModel {
    parse_hdta(text).expect("bundled fixture parses")
}

pub fn fig3() -> HdtaModel {
    load(FIG3)
}

pub fn fig4() -> HdtaModel {
    load(FIG4)
}

pub fn fig5() -> HdtaModel {
    load(FIG5)
}

pub fn fig5_no_square() -> HdtaModel {
    load(FIG5_NO_SQUARE)
}

pub fn fig9_a() -> HdtaModel {
    load(FIG9_A)
}

pub fn fig9_b() -> HdtaModel {
    load(FIG9_B)
}
