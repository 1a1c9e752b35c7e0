fn main() {
    std::process::exit(bertini::cli::main());
}
