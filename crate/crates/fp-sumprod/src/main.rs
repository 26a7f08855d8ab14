fn main() {
    std::process::exit(fp_sumprod::cli::run(std::env::args_os()));
}
