fn main() {
    std::process::exit(hermloc::cli::main_exit_code());
}
