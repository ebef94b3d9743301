fn main() {
    std::process::exit(ifm::run(std::env::args_os()));
}
