//! Holds the `acceptance` test target. Run it with
//! `cargo test -p finvic-verify --test acceptance -- --nocapture --test-threads 1`.
