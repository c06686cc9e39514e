fn main() {
    std::process::exit(hf_cli::run(std::env::args_os()));
}
