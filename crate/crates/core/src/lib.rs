//! Knowledge-editing evaluation workbench.
//!
//! The crate is organized around a small editable transformer substrate and
//! everything needed to run editing experiments against it end to end:
//!
//! - [`substrate`] — deterministic decoder-only transformer with read/write
//!   access to per-layer MLP down-projection weights, activation probes,
//!   and content-addressed snapshots.
//! - [`editors`] — six pluggable editing methods (LoRA, ROME, MEMIT, GRACE,
//!   AnyEdit, AlphaEdit) sharing one value-optimization core.
//! - [`paradigms`] — builders that turn a QA item into target knowledge
//!   (bare answer, reference text, self- or externally generated rationale).
//! - [`bench`] — the four-step benchmark construction pipeline
//!   (reference check, zero-shot filter, scenario generation, candidate
//!   filtering) plus corpus statistics.
//! - [`eval`] — post-edit inference, option permutation, answer extraction,
//!   accuracy / ROUGE-L / BLEU / judged reasoning-quality metrics, and the
//!   layer-sweep experiment.
//! - [`seq`] — sequential-editing harness with checkpointed internal and
//!   external evaluation and collapse detection.
//! - [`judge`] — transport-agnostic client for an external judge/generator
//!   LLM, with scripted transcripts for fully offline runs.
//! - [`store`] / [`report`] — run configuration, append-only result store,
//!   table rendering and plot emission.

pub mod bench;
pub mod editors;
pub mod eval;
pub mod judge;
pub mod linalg;
pub mod paradigms;
pub mod report;
pub mod seq;
pub mod store;
pub mod substrate;
pub mod testkit;
