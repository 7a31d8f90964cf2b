fn main() {
    std::process::exit(quadinterp::cli::run(std::env::args_os()));
}
