fn main() {
    std::process::exit(upqi_cli::run_cli(std::env::args_os()));
}
