//! mdbook cannot run the guide's code fences as tests, so this crate
//! includes every chapter as rustdoc and lets `cargo test --doc` do the
//! work. One module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/input-data.md")]
pub mod input_data {}

#[doc = include_str!("../../../book/src/decomposition.md")]
pub mod decomposition {}

#[doc = include_str!("../../../book/src/disclosure-risk.md")]
pub mod disclosure_risk {}

#[doc = include_str!("../../../book/src/information-loss.md")]
pub mod information_loss {}

#[doc = include_str!("../../../book/src/dataset-measures.md")]
pub mod dataset_measures {}

#[doc = include_str!("../../../book/src/dominance.md")]
pub mod dominance {}

#[doc = include_str!("../../../book/src/anonymizers.md")]
pub mod anonymizers {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
