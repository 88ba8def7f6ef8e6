fn main() {
    std::process::exit(fracdyn::cli::run());
}
