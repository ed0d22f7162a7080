fn main() {
    std::process::exit(blocknorm_cli::run(std::env::args_os()));
}
