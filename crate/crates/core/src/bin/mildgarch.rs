fn main() {
    std::process::exit(mildgarch::cli::run(std::env::args_os()));
}
