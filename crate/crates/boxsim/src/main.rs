fn main() {
    std::process::exit(boxsim::cli::main_with_args(std::env::args_os()));
}
