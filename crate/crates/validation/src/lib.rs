//! Holds the `acceptance` test target. Run it with
//! `cargo test -p condspec-validation --test acceptance`.
