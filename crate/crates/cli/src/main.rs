fn main() {
    std::process::exit(qfnoise_cli::main_with_args());
}
