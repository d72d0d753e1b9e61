fn main() {
    std::process::exit(circbin::cli::run(std::env::args_os()));
}
