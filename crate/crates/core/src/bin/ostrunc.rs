fn main() {
    std::process::exit(ostrunc::cli::run(std::env::args_os()));
}
