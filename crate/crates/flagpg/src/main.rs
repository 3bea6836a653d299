fn main() {
    std::process::exit(flagpg::cli::run());
}
