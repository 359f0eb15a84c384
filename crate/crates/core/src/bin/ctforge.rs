fn main() {
    std::process::exit(ctforge::cli::run(std::env::args_os()));
}
