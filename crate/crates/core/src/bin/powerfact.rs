fn main() {
    std::process::exit(powerfact::cli::main());
}
