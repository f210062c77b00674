fn main() {
    std::process::exit(credence_cli::run(std::env::args_os()));
}
