fn main() {
    std::process::exit(hcae::cli::run(std::env::args_os()));
}
