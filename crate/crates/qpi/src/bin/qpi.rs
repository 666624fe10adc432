fn main() {
    std::process::exit(qpi::cli::run(std::env::args_os()));
}
