fn main() {
    std::process::exit(oscillometer::cli::run(std::env::args_os()));
}
