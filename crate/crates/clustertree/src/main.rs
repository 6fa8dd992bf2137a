fn main() {
    std::process::exit(clustertree::cli::run(std::env::args_os()));
}
