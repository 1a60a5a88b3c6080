fn main() {
    std::process::exit(aniso::cli::run(std::env::args_os()));
}
