fn main() {
    std::process::exit(v2vlab::cli::main());
}
