fn main() {
    std::process::exit(labshift::cli::run());
}
