fn main() {
    std::process::exit(tracecat::cli::cli_main());
}
