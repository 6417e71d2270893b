fn main() {
    std::process::exit(cuspbound::cli::run(std::env::args_os()));
}
