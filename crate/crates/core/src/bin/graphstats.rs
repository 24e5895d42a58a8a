fn main() {
    std::process::exit(graphstats::cli::run(std::env::args_os()));
}
