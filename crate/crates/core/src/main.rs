fn main() {
    std::process::exit(specbound::cli::run(std::env::args()));
}
