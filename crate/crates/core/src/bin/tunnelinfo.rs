fn main() {
    std::process::exit(tunnelinfo::cli::run(std::env::args_os()));
}
