//! Acceptance checks live in the `acceptance` test target.
