fn main() {
    std::process::exit(slgi_cli::run(std::env::args_os()));
}
