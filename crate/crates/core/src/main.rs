fn main() {
    std::process::exit(gplab::cli::run_with_args(std::env::args_os()));
}
