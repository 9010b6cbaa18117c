fn main() {
    std::process::exit(cscool::cli::run(std::env::args_os()));
}
