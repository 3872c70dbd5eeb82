fn main() {
    std::process::exit(galois_cli::run(std::env::args_os()));
}
