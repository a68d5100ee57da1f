//! Deterministic backbone of a two-step natural language to Answer Set
//! Programming toolchain.
//!
//! Natural language statements are translated into a controlled natural
//! language (CNL) by a pluggable translator, the CNL is compiled into an
//! ASP program, and a small brute-force solver checks the result against
//! a gold encoding. The crate also ships the template-driven dataset
//! generator and the translation-quality metrics used to evaluate
//! translators.

pub mod asp;
pub mod bundled;
pub mod cnl;
pub mod codegen;
pub mod config;
pub mod dataset;
pub mod metrics;
pub mod pipeline;
pub mod solver;

pub use asp::{parse_program, print_program, validate_safety, AspProgram, AspRule};
pub use cnl::{check_syntax, parse_cnl, CnlDocument, CnlProposition, PropositionKind};
pub use codegen::{compile, compile_sentence};
