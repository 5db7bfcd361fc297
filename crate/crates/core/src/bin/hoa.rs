fn main() {
    std::process::exit(hoa::cli::main_with_args(std::env::args_os()));
}
