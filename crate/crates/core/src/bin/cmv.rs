fn main() {
    std::process::exit(cmv_core::cli::main_with_args(std::env::args_os()));
}
