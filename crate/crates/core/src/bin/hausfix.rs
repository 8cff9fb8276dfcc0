fn main() {
    std::process::exit(hausfix::cli::main());
}
