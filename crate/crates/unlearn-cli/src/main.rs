fn main() {
    std::process::exit(unlearn_cli::main_with(std::env::args_os()));
}
