fn main() {
    std::process::exit(strictstable::cli::main_with_args(std::env::args_os()));
}
