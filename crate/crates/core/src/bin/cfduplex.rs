fn main() {
    std::process::exit(cfduplex_core::cli::run_from(std::env::args()));
}
