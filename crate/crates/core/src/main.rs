fn main() {
    std::process::exit(ijcm::cli::main());
}
