fn main() {
    std::process::exit(ogring_verifier::cli::run(std::env::args_os()));
}
