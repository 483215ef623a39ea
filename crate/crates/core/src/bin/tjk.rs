fn main() {
    std::process::exit(toeplitz::cli::main());
}
