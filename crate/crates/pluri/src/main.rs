fn main() {
    std::process::exit(pluri::run(std::env::args_os()));
}
