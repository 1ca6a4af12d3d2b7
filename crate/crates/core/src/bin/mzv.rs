fn main() {
    std::process::exit(mzv_core::cli::main_entry());
}
