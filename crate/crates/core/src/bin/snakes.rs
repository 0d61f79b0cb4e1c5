fn main() {
    std::process::exit(domino_snakes::cli::run(std::env::args_os()));
}
