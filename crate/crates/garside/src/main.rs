fn main() {
    std::process::exit(garside::cli::run());
}
