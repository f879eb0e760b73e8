fn main() {
    std::process::exit(noma_as::cli::main_from_args(std::env::args_os()));
}
