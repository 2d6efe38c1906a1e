//! End-to-end duplex coding and telexchanging runs.

pub mod duplex;
pub mod telex;
pub mod types;

pub use duplex::{dnot_ideal, duplex_decode, duplex_decode_distribution, duplex_encode, duplex_heralded, duplex_run};
pub use telex::{
    ddnot_ideal, message_delta1, random_qubit, telex_decode, telex_heralded, telex_pre_announcement, telex_run,
    Announcement, TelexDecode,
};
pub use types::{
    DuplexMessage, Heralded, ProtocolOutcome, QubitState, Status, TelexMessage, ELECTRON, PATH, POLARIZATION,
};
