fn main() {
    std::process::exit(perpetual::cli::run_main());
}
