fn main() {
    std::process::exit(emcert::cli::run(std::env::args_os()));
}
