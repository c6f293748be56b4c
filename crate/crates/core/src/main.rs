fn main() {
    std::process::exit(cubecat::cli::run(std::env::args_os()));
}
