fn main() {
    std::process::exit(devs_consanguinity::cli::cli_main(std::env::args_os()));
}
