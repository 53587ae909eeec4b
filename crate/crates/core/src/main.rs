fn main() {
    std::process::exit(aoi_tradeoff::cli::main(std::env::args_os()));
}
