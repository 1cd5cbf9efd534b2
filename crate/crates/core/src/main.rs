fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(mobi::cli::run_cli(&argv));
}
