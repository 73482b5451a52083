fn main() {
    std::process::exit(minrf_cli::run());
}
