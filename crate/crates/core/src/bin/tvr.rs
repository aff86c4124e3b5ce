fn main() {
    std::process::exit(turaev_viro::cli::run(std::env::args_os()));
}
