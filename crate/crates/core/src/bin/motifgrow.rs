fn main() {
    std::process::exit(motifgrow::cli::main_with_args(std::env::args_os()));
}
