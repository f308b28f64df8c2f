//! Holds the `acceptance` test target. It is a separate package so it runs after the other workspace tests.
