fn main() {
    std::process::exit(reflen_cli::main_with_args(std::env::args_os()));
}
