fn main() {
    std::process::exit(thermoscreen::cli::cli_dispatch(std::env::args_os()));
}
