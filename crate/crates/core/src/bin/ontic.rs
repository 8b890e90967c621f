fn main() {
    std::process::exit(ontic::cli::main_with(std::env::args_os()));
}
