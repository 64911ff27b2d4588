fn main() {
    std::process::exit(ehs::cli::run());
}
