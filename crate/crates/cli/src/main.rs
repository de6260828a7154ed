fn main() {
    std::process::exit(trajgp_cli::run(std::env::args_os()));
}
