fn main() {
    std::process::exit(threshold_games::cli::main_with_args(std::env::args_os()));
}
