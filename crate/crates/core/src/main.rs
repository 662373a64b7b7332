fn main() {
    std::process::exit(teamcover::cli::run(std::env::args_os()));
}
