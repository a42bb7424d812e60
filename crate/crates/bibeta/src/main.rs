fn main() {
    std::process::exit(bibeta::cli::run(std::env::args_os()));
}
