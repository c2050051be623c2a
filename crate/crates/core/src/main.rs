fn main() {
    std::process::exit(sharpbound::cli::main_with_args(std::env::args_os()));
}
