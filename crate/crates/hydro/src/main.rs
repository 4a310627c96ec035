fn main() {
    std::process::exit(sep_hydro::cli::run(std::env::args_os()));
}
