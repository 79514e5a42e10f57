fn main() {
    std::process::exit(condspec_cli::run_cli(std::env::args_os()));
}
