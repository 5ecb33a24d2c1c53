fn main() {
    std::process::exit(hopf_flow::cli::run(std::env::args_os()));
}
