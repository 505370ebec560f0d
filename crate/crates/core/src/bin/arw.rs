fn main() {
    std::process::exit(arw::cli::main_from_env());
}
