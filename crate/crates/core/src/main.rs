fn main() {
    std::process::exit(gatecut::cli::main_with_args(std::env::args_os()));
}
