fn main() {
    std::process::exit(jcent::cli::run(std::env::args_os()));
}
