fn main() {
    std::process::exit(analog_search::cli::run_cli(std::env::args_os()));
}
