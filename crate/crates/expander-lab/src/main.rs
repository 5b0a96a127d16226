fn main() {
    std::process::exit(expander_lab::cli::run(std::env::args_os()));
}
