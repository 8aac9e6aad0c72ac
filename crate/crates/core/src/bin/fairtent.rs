fn main() {
    std::process::exit(fairtent::cli::run(std::env::args_os()));
}
