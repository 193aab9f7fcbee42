fn main() {
    let code = nanowire_core::cli::main_with_args(std::env::args_os().skip(1));
    std::process::exit(code);
}
