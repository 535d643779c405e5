fn main() {
    std::process::exit(edgealloc::cli::main_entry());
}
