//! Brane Calculi (MBD + PEP fragments): parser, reduction semantics and a
//! contextual control flow analysis with causality and incompatibility
//! information.

pub mod cfa;
pub mod properties;
pub mod semantics;
pub mod syntax;
pub mod verify;
