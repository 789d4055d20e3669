//! Suite definitions behind the `taufact` binary, exposed as a library so
//! integration tests can interrogate the item list and the anchor manifest.

pub mod suite;
