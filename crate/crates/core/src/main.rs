fn main() {
    std::process::exit(rankinlab::cli::main_with_args(std::env::args_os()));
}
