fn main() {
    std::process::exit(dhmono::cli::run(std::env::args_os()));
}
