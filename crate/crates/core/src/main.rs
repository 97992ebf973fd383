fn main() {
    std::process::exit(orbivol::cli::main_with_args(std::env::args_os()));
}
