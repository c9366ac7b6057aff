fn main() {
    std::process::exit(mawtc::cli::main_with_args(std::env::args_os()));
}
