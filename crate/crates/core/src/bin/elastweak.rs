fn main() {
    std::process::exit(elastweak::cli::run(std::env::args_os()));
}
