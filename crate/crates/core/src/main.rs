fn main() {
    std::process::exit(isogeny_lab::cli::main_with_args(std::env::args_os()));
}
