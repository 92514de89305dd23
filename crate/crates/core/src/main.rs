fn main() {
    std::process::exit(sympcap::cli::run(std::env::args_os()));
}
