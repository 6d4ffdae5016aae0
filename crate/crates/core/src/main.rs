fn main() {
    std::process::exit(qrep::cli::run(std::env::args_os()));
}
