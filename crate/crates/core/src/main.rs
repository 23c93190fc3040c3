fn main() {
    std::process::exit(iqc::cli::main(std::env::args_os()));
}
