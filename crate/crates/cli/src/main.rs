fn main() {
    std::process::exit(efg_cli::run(std::env::args_os()));
}
