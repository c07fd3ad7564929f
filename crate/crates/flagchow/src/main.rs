fn main() {
    let code = flagchow::cli::main_with(std::env::args_os());
    std::process::exit(code);
}
