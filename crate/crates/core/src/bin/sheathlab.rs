fn main() {
    std::process::exit(sheathlab::harness::cli_main(std::env::args_os()));
}
