#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    ri_ergodic_cli::fuzzing::eval_input(data);
});
