// SPDX-License-Identifier: MIT OR Apache-2.0

fn main() -> std::process::ExitCode {
    wavesc::run(std::env::args_os())
}
