fn main() {
    std::process::exit(inducing::cli::main_from(std::env::args_os()));
}
