fn main() {
    std::process::exit(projfree::harness::run_cli(std::env::args_os()));
}
