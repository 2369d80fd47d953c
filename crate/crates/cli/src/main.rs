fn main() {
    std::process::exit(hypertrop_cli::run(std::env::args_os()));
}
