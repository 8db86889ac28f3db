fn main() {
    std::process::exit(kicked_fhn::cli::main_with_args(std::env::args_os()));
}
