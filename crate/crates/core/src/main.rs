fn main() {
    std::process::exit(siegel_growth::cli::run(std::env::args_os()));
}
