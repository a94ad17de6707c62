fn main() {
    std::process::exit(qmod::cli::main_entry(std::env::args_os()));
}
