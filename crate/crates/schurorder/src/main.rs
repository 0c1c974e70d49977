fn main() {
    std::process::exit(schurorder::cli::run(std::env::args_os()));
}
