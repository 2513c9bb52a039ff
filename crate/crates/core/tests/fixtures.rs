mod common;

use boxtract_core::check::check_env;
use common::*;

const ALL: &[&str] = &[
    "lists.src",
    "aliases.src",
    "foo.src",
    "counter.src",
    "safe_head.src",
    "ack.src",
    "record.src",
];

#[test]
fn every_fixture_type_checks() {
    for f in ALL {
        check_env(&load(&[f])).unwrap_or_else(|e| panic!("{f}: {e}"));
    }
}
