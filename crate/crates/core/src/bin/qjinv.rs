fn main() {
    std::process::exit(qjinv::cli::run(std::env::args_os()));
}
