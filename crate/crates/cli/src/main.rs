fn main() {
    std::process::exit(surfill_cli::cli_main(std::env::args_os()));
}
