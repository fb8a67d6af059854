fn main() {
    std::process::exit(tto_eof::cli::run(std::env::args_os().collect()));
}
