fn main() {
    std::process::exit(mct::cli::run(std::env::args_os()));
}
