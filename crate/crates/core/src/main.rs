fn main() {
    std::process::exit(cnl::cli::run(std::env::args_os()));
}
