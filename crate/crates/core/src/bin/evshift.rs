fn main() {
    std::process::exit(evshift::cli::main(std::env::args_os()));
}
