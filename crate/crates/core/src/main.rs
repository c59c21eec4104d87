fn main() {
    std::process::exit(selberg_bounds::cli::run(std::env::args_os()));
}
