fn main() {
    std::process::exit(lmp::cli::run_command(std::env::args_os()));
}
