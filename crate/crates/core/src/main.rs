fn main() {
    std::process::exit(minset::cli::main_with(std::env::args_os()));
}
