fn main() {
    std::process::exit(specsweep::cli::run(std::env::args_os()));
}
