fn main() {
    std::process::exit(turnvol::cli::run(std::env::args_os()));
}
