//! Zeno-type gates and their closed-form heralds.

pub mod closed_form;
mod engine;
pub mod gates;
pub mod params;

pub use closed_form::{
    cqz_herald, delta1, lambda0, lambda1, lambda2, lambda3, lambda4, mqz_closed_form, mqz_herald, qz_herald, zeta_c,
    zeta_q,
};
pub use engine::LossEvent;
pub use gates::{
    cqz_gate, dcqz_entangle, dmqz_gate, mqz_gate, qz_gate, Ao, AoMapping, GateVariant, HeraldReport, Mode, Rail,
};
pub use params::{theta, ZenoParams};

pub(crate) use gates::{dcqz_exec, dmqz_exec, mqz_exec, Exec};
